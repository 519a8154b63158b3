#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "whittaker/free_field.hpp"

namespace whittaker {

/// Basis vector d^k (x) c(-n1)... d(-m1)... (x) 1 of the lattice module
/// Pi_lambda. Parts are stored as positive entries in decreasing order.
struct PiLabel {
  int d0 = 0;
  std::vector<int> c, d;

  int depth() const {
    int total = 0;
    for (int n : c) total += n;
    for (int n : d) total += n;
    return total;
  }
  int length() const { return d0 + static_cast<int>(c.size() + d.size()); }

  friend auto operator<=>(const PiLabel&, const PiLabel&) = default;
  friend bool operator==(const PiLabel&, const PiLabel&) = default;
};

inline std::string format_pi(const PiLabel& l) {
  std::string out;
  auto emit = [&](const std::vector<int>& part, const char* name) {
    std::size_t i = 0;
    while (i < part.size()) {
      std::size_t j = i;
      while (j < part.size() && part[j] == part[i]) ++j;
      out += std::string(name) + "(" + std::to_string(-part[i]) + ")";
      if (j - i > 1) out += "^" + std::to_string(j - i);
      out += "·";
      i = j;
    }
  };
  emit(l.c, "c");
  emit(l.d, "d");
  if (l.d0) out += "d^" + std::to_string(l.d0) + "·";
  return out + "w";
}

namespace detail {

// Partitions of n as multiplicity maps part -> count.
inline const std::vector<std::map<int, int>>& partitions(int n) {
  static std::map<int, std::vector<std::map<int, int>>> memo;
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  std::vector<std::map<int, int>> out;
  std::map<int, int> current;
  std::function<void(int, int)> rec = [&](int left, int largest) {
    if (left == 0) {
      out.push_back(current);
      return;
    }
    for (int p = std::min(left, largest); p >= 1; --p) {
      ++current[p];
      rec(left - p, p);
      if (--current[p] == 0) current.erase(p);
    }
  };
  rec(n, n);
  return memo.emplace(n, std::move(out)).first->second;
}

inline Rational factorial(int k) {
  Rational out = 1;
  for (int i = 2; i <= k; ++i) out *= i;
  return out;
}

}  // namespace detail

/// The module Pi_lambda = C[d] (x) Fock(c, d) for the rank-two lattice with
/// <c, d> = 2 and <c, c> = <d, d> = 0. On it c(0) = -1, d(0) multiplies by d and
/// e^{nc} sends p(d) to lambda^n p(d - 2n). The Weyl fields a = e^c, its inverse
/// a^{-1} = e^{-c} and a* are realized by vertex operators, and the affine
/// algebra acts at the critical level with Segal-Sugawara character `chi`
/// (weight-two convention).
class LatticeModule {
 public:
  using Label = PiLabel;
  using Vector = LinComb<PiLabel>;

  LatticeModule(Rational lambda, LaurentData chi) : lambda_(std::move(lambda)), chi_(std::move(chi)) {
    if (lambda_ == 0) throw std::domain_error("the lattice module needs lambda != 0");
    if (chi_.convention != LaurentData::Convention::Weight2) {
      throw std::domain_error("chi must use the weight-two convention");
    }
  }

  const Rational& lambda() const { return lambda_; }
  const LaurentData& chi() const { return chi_; }
  Rational level() const { return -2; }
  AlgebraId algebra() const { return AlgebraId::AffineSl2; }
  Vector cyclic() const { return Vector::unit({}); }

  int mode_bound(const Vector& v) const {
    return max_depth_of(v, [](const Label& l) { return l.depth(); }) + 2 +
           std::max(1, chi_.max_mode());
  }

  // Heisenberg generators.

  Vector c_mode(int n, const Vector& v) const {
    return apply_linear(v, [&](const Label& l) { return c_label(n, l); });
  }
  Vector d_mode(int n, const Vector& v) const {
    return apply_linear(v, [&](const Label& l) { return d_label(n, l); });
  }
  Vector alpha(int n, const Vector& v) const {
    return Rational(1, 2) * (c_mode(n, v) + d_mode(n, v));
  }
  Vector beta(int n, const Vector& v) const {
    return Rational(1, 2) * (c_mode(n, v) - d_mode(n, v));
  }

  // Weyl fields.

  Vector a(int n, const Vector& v) const { return field(Field::A, n, v); }
  Vector ainv(int n, const Vector& v) const { return field(Field::Ainv, n, v); }
  Vector astar(int n, const Vector& v) const { return field(Field::Astar, n, v); }

  /// Affine generators e(n) = a(n), h(n) = -2 beta(n) and f(n) from the
  /// critical Wakimoto cubic plus sum_j chi(j) a^{-1}(n - j).
  Vector act(const GenSymbol& g, const Vector& v) const {
    switch (g.family) {
      case Family::E: return a(g.mode, v);
      case Family::H: return Rational(-2) * beta(g.mode, v);
      case Family::F: return field(Field::F, g.mode, v);
      case Family::C: return Rational(-2) * v;
      default:
        throw std::domain_error("symbol " + to_string(g) + " does not act on the lattice module");
    }
  }

  /// Virasoro zero mode of the lattice conformal vector.
  Vector L0(const Vector& v) const {
    Vector out = Rational(1, 2) * (c_mode(0, d_mode(0, v)) + d_mode(0, v));
    int top = max_depth_of(v, [](const Label& l) { return l.depth(); });
    for (int m = 1; m <= top; ++m) {
      out.add_scaled(c_mode(-m, d_mode(m, v)), Rational(1, 2));
      out.add_scaled(d_mode(-m, c_mode(m, v)), Rational(1, 2));
    }
    return out;
  }

  /// Labels with Fock depth <= max_depth and total degree <= max_length.
  std::vector<Label> box(const TruncationBox& box) const {
    std::vector<Label> out;
    Label current;
    // slots: (0, n) -> c(-n), (1, n) -> d(-n), (2, 0) -> one power of d
    std::vector<std::pair<int, int>> slots;
    for (int n = 1; n <= box.max_depth; ++n) slots.push_back({0, n});
    for (int n = 1; n <= box.max_depth; ++n) slots.push_back({1, n});
    slots.push_back({2, 0});
    std::function<void(std::size_t, int, int)> rec = [&](std::size_t start, int depth, int len) {
      out.push_back(current);
      if (len >= box.max_length) return;
      for (std::size_t i = start; i < slots.size(); ++i) {
        auto [kind, n] = slots[i];
        if (depth + n > box.max_depth) continue;
        if (kind == 2) {
          ++current.d0;
        } else {
          detail::insert_desc(kind == 0 ? current.c : current.d, n);
        }
        rec(i, depth + n, len + 1);
        if (kind == 2) {
          --current.d0;
        } else {
          detail::remove_one(kind == 0 ? current.c : current.d, n);
        }
      }
    };
    rec(0, 0, 0);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  enum class Field { A, Ainv, Astar, F };

  Vector c_label(int n, const Label& l) const {
    Vector out;
    if (n == 0) return Vector(l, -1);
    Label x = l;
    if (n < 0) {
      detail::insert_desc(x.c, -n);
      return Vector(x, 1);
    }
    int count = detail::remove_one(x.d, n);
    if (count) out.add_term(x, 2 * n * count);
    return out;
  }

  Vector d_label(int n, const Label& l) const {
    Vector out;
    Label x = l;
    if (n == 0) {
      ++x.d0;
      return Vector(x, 1);
    }
    if (n < 0) {
      detail::insert_desc(x.d, -n);
      return Vector(x, 1);
    }
    int count = detail::remove_one(x.c, n);
    if (count) out.add_term(x, 2 * n * count);
    return out;
  }

  // e^{mc}: d^k -> lambda^m (d - 2m)^k.
  Vector shift(int m, const Label& l) const {
    Vector out;
    Rational scale = power(lambda_, m);
    for (int j = 0; j <= l.d0; ++j) {
      Label x = l;
      x.d0 = j;
      out.add_term(x, scale * binomial(l.d0, j) * power(Rational(-2 * m), l.d0 - j));
    }
    return out;
  }

  // Coefficient of z^p in exp(sign * m * sum_n c(-+n) z^(+-n) / n), applied to v.
  Vector exp_coefficient(int m, int p, bool creation, const Vector& v) const {
    Vector out;
    Rational base = creation ? Rational(m) : Rational(-m);
    for (const auto& part : detail::partitions(p)) {
      Rational coeff = 1;
      Vector x = v;
      for (const auto& [n, k] : part) {
        coeff *= power(base / n, k) / detail::factorial(k);
        for (int i = 0; i < k; ++i) x = c_mode(creation ? -n : n, x);
      }
      out.add_scaled(x, coeff);
    }
    return out;
  }

  // Mode n of Y(e^{mc}, z) = sum_n (.)_n z^(-n-1) for m = 1, and mode n of
  // a^{-1}(z) = Y(e^{-c}, z) z^2 for m = -1; both reduce to
  // sum_q P_{q-n} Q_q e^{mc}.
  Vector vertex_label(int m, int n, const Label& l) const {
    Vector shifted = shift(m, l);
    int top = 0;
    for (int k : l.d) top += k;
    Vector out;
    for (int q = std::max(0, n); q <= top; ++q) {
      Vector annihilated = exp_coefficient(m, q, false, shifted);
      if (annihilated.is_zero()) continue;
      out += exp_coefficient(m, q - n, true, annihilated);
    }
    return out;
  }

  // a*(n) = -[sum_{k<=-1} alpha(k) a^{-1}(n-k) + sum_{k>=0} a^{-1}(n-k) alpha(k)].
  Vector astar_label(int n, const Label& l) const {
    Vector v = Vector::unit(l);
    int w = l.depth();
    Vector out;
    for (int k = std::min(n - w, 0); k <= -1; ++k) out -= alpha(k, ainv(n - k, v));
    for (int k = 0; k <= w; ++k) {
      Vector x = alpha(k, v);
      if (!x.is_zero()) out -= ainv(n - k, x);
    }
    return out;
  }

  // Sum over k1 + k2 = total of a*(k1) a*(k2) u, applying the larger mode first
  // so the range stays finite.
  Vector astar_pair(int total, const Vector& u) const {
    int w = max_depth_of(u, [](const Label& l) { return l.depth(); });
    Vector out;
    for (int hi = w + 1; 2 * hi >= total; --hi) {
      int lo = total - hi;
      Vector x = astar(hi, u);
      if (x.is_zero()) continue;
      out.add_scaled(astar(lo, x), hi == lo ? 1 : 2);
    }
    return out;
  }

  // -:a* a* a:(n) + 2 n a*(n) + sum_j chi(j) a^{-1}(n - j).
  Vector f_label(int n, const Label& l) const {
    Vector v = Vector::unit(l);
    int w = l.depth();
    Vector out;
    for (int j = std::min(n - 2 * (w + 1), 0); j <= w; ++j) {
      if (j <= -1) {
        out -= a(j, astar_pair(n - j, v));
      } else {
        Vector x = a(j, v);
        if (!x.is_zero()) out -= astar_pair(n - j, x);
      }
    }
    out.add_scaled(astar(n, v), 2 * n);
    for (const auto& [j, chi_j] : chi_.coeffs) out.add_scaled(ainv(n - j, v), chi_j);
    return out;
  }

  Vector field(Field which, int n, const Vector& v) const {
    return apply_linear(v, [&](const Label& l) { return cached(which, n, l); });
  }

  const Vector& cached(Field which, int n, const Label& l) const {
    auto key = std::make_tuple(which, n, l);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Vector out;
    if (l.d0 > 0) {
      // [d(0), a(n)] = 2 a(n) and the other three fields carry charge -2, so
      // x(n) d^k = (d + s)^k x(n) with s = -2 for a and s = 2 otherwise.
      Label bare = l;
      bare.d0 = 0;
      const Vector& base = cached(which, n, bare);
      const int s = which == Field::A ? -2 : 2;
      for (const auto& [t, coeff] : base) {
        for (int j = 0; j <= l.d0; ++j) {
          Label x = t;
          x.d0 += j;
          out.add_term(x, coeff * binomial(l.d0, j) * power(Rational(s), l.d0 - j));
        }
      }
      return cache_.emplace(std::move(key), std::move(out)).first->second;
    }
    switch (which) {
      case Field::A: out = vertex_label(1, n, l); break;
      case Field::Ainv: out = vertex_label(-1, n, l); break;
      case Field::Astar: out = astar_label(n, l); break;
      case Field::F: out = f_label(n, l); break;
    }
    return cache_.emplace(std::move(key), std::move(out)).first->second;
  }

  Rational lambda_;
  LaurentData chi_;
  mutable std::map<std::tuple<Field, int, Label>, Vector> cache_;
};

}  // namespace whittaker
