#pragma once

#include <concepts>
#include <map>
#include <stdexcept>
#include <utility>

#include "whittaker/affine_algebra.hpp"

namespace whittaker {

/// Finitely many coefficients of a Laurent series. Weight one means
/// chi(z) = sum chi_n z^(-n-1); weight two means c(z) = sum c_n z^(-n-2).
struct LaurentData {
  enum class Convention { Weight1, Weight2 };
  Convention convention = Convention::Weight2;
  std::map<int, Rational> coeffs;

  Rational at(int n) const {
    auto it = coeffs.find(n);
    return it == coeffs.end() ? Rational(0) : it->second;
  }
  void set(int n, const Rational& value) {
    if (value == 0) {
      coeffs.erase(n);
    } else {
      coeffs[n] = value;
    }
  }
  int max_mode() const { return coeffs.empty() ? 0 : coeffs.rbegin()->first; }
  int min_mode() const { return coeffs.empty() ? 0 : coeffs.begin()->first; }

  static LaurentData weight1(std::map<int, Rational> c) {
    LaurentData out{Convention::Weight1, {}};
    for (const auto& [n, v] : c) out.set(n, v);
    return out;
  }
  static LaurentData weight2(std::map<int, Rational> c) {
    LaurentData out{Convention::Weight2, {}};
    for (const auto& [n, v] : c) out.set(n, v);
    return out;
  }
  friend bool operator==(const LaurentData&, const LaurentData&) = default;
};

/// c = chi^2 / 2 - d chi / dz, in modes: c_n = 1/2 sum chi_j chi_(n-j) + (n+1) chi_n.
inline LaurentData central_character_from_chi(const LaurentData& chi) {
  if (chi.convention != LaurentData::Convention::Weight1) {
    throw std::domain_error("chi must use the weight-one convention");
  }
  LaurentData out{LaurentData::Convention::Weight2, {}};
  std::map<int, Rational> acc;
  for (const auto& [j, a] : chi.coeffs) {
    for (const auto& [k, b] : chi.coeffs) acc[j + k] += Rational(1, 2) * a * b;
    acc[j] += Rational(j + 1) * a;
  }
  for (const auto& [n, v] : acc) out.set(n, v);
  return out;
}

template <class M>
concept AffineModule = requires(const M& m, const GenSymbol& g, const typename M::Vector& v) {
  typename M::Label;
  { m.act(g, v) } -> std::same_as<typename M::Vector>;
  { m.level() } -> std::convertible_to<Rational>;
  { m.mode_bound(v) } -> std::convertible_to<int>;
};

/// The quadratic field S(z) = :e f: + :f e: + 1/2 :h h:, from which the
/// Sugawara field is S / (2(kappa+2)) and the Segal-Sugawara field is S / 2.
/// Results on basis labels are cached, so one instance should be reused.
template <AffineModule M>
class QuadraticFields {
 public:
  using Vector = typename M::Vector;
  using Label = typename M::Label;

  explicit QuadraticFields(const M& module) : mod_(module) {}

  /// Normally ordered :x(k) y(n-k): applied to v; the factor of negative
  /// mode stands to the left.
  Vector normal_product(Family x, Family y, int n, int k, const Vector& v) const {
    if (k < 0) return mod_.act({x, k}, mod_.act({y, n - k}, v));
    return mod_.act({y, n - k}, mod_.act({x, k}, v));
  }

  /// Term k of the mode sum S(n).
  Vector slice(int n, int k, const Vector& v) const {
    Vector out = normal_product(Family::E, Family::F, n, k, v);
    out += normal_product(Family::F, Family::E, n, k, v);
    out.add_scaled(normal_product(Family::H, Family::H, n, k, v), Rational(1, 2));
    return out;
  }

  /// Range of k outside which every slice of S(n) vanishes on v.
  std::pair<int, int> slice_range(int n, const Vector& v) const {
    int b = mod_.mode_bound(v);
    return {std::min(n - b, 0), b};
  }

  Vector S(int n, const Vector& v) const {
    Vector out;
    for (const auto& [label, coeff] : v) out.add_scaled(S_label(n, label), coeff);
    return out;
  }

  Vector L(int n, const Vector& v) const {
    Rational k2 = Rational(mod_.level()) + 2;
    if (k2 == 0) throw std::domain_error("the Sugawara field needs a noncritical level");
    return Rational(1) / (2 * k2) * S(n, v);
  }

  Vector T(int n, const Vector& v) const {
    if (Rational(mod_.level()) != -2) {
      throw std::domain_error("the Segal-Sugawara field needs the critical level");
    }
    return Rational(1, 2) * S(n, v);
  }

  /// Residual of the Virasoro relation with central charge 3 kappa / (kappa + 2).
  Vector virasoro_residual(int n, int m, const Vector& v) const {
    Rational k = mod_.level();
    Vector out = L(n, L(m, v)) - L(m, L(n, v));
    out.add_scaled(L(n + m, v), -(n - m));
    if (n + m == 0) {
      Rational c1 = 3 * k / (k + 2);
      out.add_scaled(v, -Rational(static_cast<long>(n) * n * n - n) / 12 * c1);
    }
    return out;
  }

  /// Residual of [L(n), x(m)] = -m x(n+m).
  Vector sugawara_residual(int n, const GenSymbol& x, const Vector& v) const {
    Vector out = L(n, mod_.act(x, v)) - mod_.act(x, L(n, v));
    out.add_scaled(mod_.act(GenSymbol{x.family, x.mode + n}, v), x.mode);
    return out;
  }

  /// Residual of [T(n), x(m)] = 0.
  Vector center_residual(int n, const GenSymbol& x, const Vector& v) const {
    return T(n, mod_.act(x, v)) - mod_.act(x, T(n, v));
  }

  const M& module() const { return mod_; }

 private:
  const Vector& S_label(int n, const Label& label) const {
    auto key = std::make_pair(n, label);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Vector v = Vector::unit(label);
    auto [lo, hi] = slice_range(n, v);
    Vector out;
    for (int k = lo; k <= hi; ++k) out += slice(n, k, v);
    return cache_.emplace(std::move(key), std::move(out)).first->second;
  }

  const M& mod_;
  mutable std::map<std::pair<int, Label>, Vector> cache_;
};

template <AffineModule M>
typename M::Vector L_mode(const M& mod, int n, const typename M::Vector& v) {
  return QuadraticFields<M>(mod).L(n, v);
}

template <AffineModule M>
typename M::Vector T_mode(const M& mod, int n, const typename M::Vector& v) {
  return QuadraticFields<M>(mod).T(n, v);
}

}  // namespace whittaker
