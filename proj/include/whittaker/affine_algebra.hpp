#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "whittaker/exact_core.hpp"

namespace whittaker {

/// Generator families across all supported Lie algebras. `Phi` is the
/// rescaled Cartan field of the one-sided Heisenberg-Borel algebra; `C1` is
/// the Virasoro central element.
enum class Family : std::uint8_t { E, F, H, L, T, D, C, C1, Phi };

struct GenSymbol {
  Family family = Family::C;
  int mode = 0;

  friend auto operator<=>(const GenSymbol&, const GenSymbol&) = default;
};

inline GenSymbol e(int n) { return {Family::E, n}; }
inline GenSymbol f(int n) { return {Family::F, n}; }
inline GenSymbol h(int n) { return {Family::H, n}; }
inline GenSymbol L(int n) { return {Family::L, n}; }
inline GenSymbol T(int n) { return {Family::T, n}; }
inline GenSymbol phi(int n) { return {Family::Phi, n}; }
inline GenSymbol d() { return {Family::D, 0}; }
inline GenSymbol c() { return {Family::C, 0}; }
inline GenSymbol c1() { return {Family::C1, 0}; }

inline bool is_central(const GenSymbol& g) {
  return g.family == Family::C || g.family == Family::C1;
}

inline std::string to_string(const GenSymbol& g) {
  switch (g.family) {
    case Family::E: return "e(" + std::to_string(g.mode) + ")";
    case Family::F: return "f(" + std::to_string(g.mode) + ")";
    case Family::H: return "h(" + std::to_string(g.mode) + ")";
    case Family::L: return "L(" + std::to_string(g.mode) + ")";
    case Family::T: return "T(" + std::to_string(g.mode) + ")";
    case Family::Phi: return "phi(" + std::to_string(g.mode) + ")";
    case Family::D: return "d";
    case Family::C: return "c";
    case Family::C1: return "c1";
  }
  return "?";
}

enum class AlgebraId {
  AffineSl2,    // e, f, h, c
  ExtendedSl2,  // plus the derivation d
  BorelVir,     // L, h, e, c, c1
  BorelT,       // h, e, c, T, d
  Ttilde,       // T, d
  Borel1,       // phi, e, c
};

inline std::string to_string(AlgebraId id) {
  switch (id) {
    case AlgebraId::AffineSl2: return "affine_sl2";
    case AlgebraId::ExtendedSl2: return "extended_sl2";
    case AlgebraId::BorelVir: return "borel_vir";
    case AlgebraId::BorelT: return "borel_t";
    case AlgebraId::Ttilde: return "t_tilde";
    case AlgebraId::Borel1: return "borel_1";
  }
  return "?";
}

inline bool in_alphabet(AlgebraId alg, const GenSymbol& g) {
  using F = Family;
  switch (alg) {
    case AlgebraId::AffineSl2:
      return g.family == F::E || g.family == F::F || g.family == F::H || g.family == F::C;
    case AlgebraId::ExtendedSl2:
      return in_alphabet(AlgebraId::AffineSl2, g) || g.family == F::D;
    case AlgebraId::BorelVir:
      return g.family == F::L || g.family == F::H || g.family == F::E || g.family == F::C ||
             g.family == F::C1;
    case AlgebraId::BorelT:
      return g.family == F::H || g.family == F::E || g.family == F::C || g.family == F::T ||
             g.family == F::D;
    case AlgebraId::Ttilde:
      return g.family == F::T || g.family == F::D;
    case AlgebraId::Borel1:
      return g.family == F::Phi || g.family == F::E || g.family == F::C;
  }
  return false;
}

using LieElement = LinComb<GenSymbol>;

namespace detail {

// Brackets [x, y] for the ordered pairs handled directly; the caller
// antisymmetrizes everything else.
inline bool bracket_ordered(const GenSymbol& x, const GenSymbol& y, LieElement& out) {
  using F = Family;
  const int n = x.mode, m = y.mode;
  const bool diag = n + m == 0;
  if (is_central(x) || is_central(y)) return true;
  if (x.family == F::D) {
    if (y.family == F::D) return true;
    out.add_term({y.family, m}, m);
    return true;
  }
  if (x.family == F::T) {
    return y.family == F::T || y.family == F::E || y.family == F::F || y.family == F::H ||
           y.family == F::L || y.family == F::Phi;
  }
  if (x.family == F::E && y.family == F::F) {
    out.add_term(h(n + m), 1);
    if (diag) out.add_term(c(), n);
    return true;
  }
  if (x.family == F::H && y.family == F::E) {
    out.add_term(e(n + m), 2);
    return true;
  }
  if (x.family == F::H && y.family == F::F) {
    out.add_term(f(n + m), -2);
    return true;
  }
  if (x.family == F::H && y.family == F::H) {
    if (diag) out.add_term(c(), 2 * n);
    return true;
  }
  if ((x.family == F::E && y.family == F::E) || (x.family == F::F && y.family == F::F)) {
    return true;
  }
  if (x.family == F::L && y.family == F::L) {
    out.add_term(L(n + m), n - m);
    if (diag) {
      Rational k = Rational(static_cast<long>(n) * n * n - n) / 12;
      out.add_term(c1(), k);
    }
    return true;
  }
  if (x.family == F::L && (y.family == F::E || y.family == F::F || y.family == F::H)) {
    out.add_term({y.family, n + m}, -m);
    return true;
  }
  if (x.family == F::Phi && y.family == F::Phi) {
    if (diag) out.add_term(c(), -4 * n);
    return true;
  }
  if (x.family == F::Phi && y.family == F::E) {
    out.add_term(e(n + m), 2);
    return true;
  }
  return false;
}

}  // namespace detail

/// Lie bracket [x, y] in the given algebra; symbols outside its alphabet are
/// a domain error.
inline LieElement bracket(AlgebraId alg, const GenSymbol& x, const GenSymbol& y) {
  if (!in_alphabet(alg, x) || !in_alphabet(alg, y)) {
    throw std::domain_error("symbol outside the alphabet of " + to_string(alg) + ": " +
                            to_string(x) + ", " + to_string(y));
  }
  LieElement out;
  if (x == y) return out;
  if (detail::bracket_ordered(x, y, out)) return out;
  LieElement rev;
  if (detail::bracket_ordered(y, x, rev)) return -rev;
  throw std::logic_error("no bracket rule for " + to_string(x) + ", " + to_string(y));
}

inline LieElement bracket(AlgebraId alg, const LieElement& x, const LieElement& y) {
  LieElement out;
  for (const auto& [gx, cx] : x) {
    for (const auto& [gy, cy] : y) out.add_scaled(bracket(alg, gx, gy), cx * cy);
  }
  return out;
}

template <class Fn>
LieElement map_linear(const LieElement& x, Fn&& on_symbol) {
  return apply_linear(x, [&](const GenSymbol& g) { return on_symbol(g); });
}

/// The involution of the extended loop algebra swapping e and f with a mode
/// shift.
inline LieElement sigma(const GenSymbol& x) {
  if (!in_alphabet(AlgebraId::ExtendedSl2, x)) {
    throw std::domain_error("sigma is defined on the extended affine algebra only");
  }
  LieElement out;
  switch (x.family) {
    case Family::E: out.add_term(f(x.mode + 1), 1); break;
    case Family::F: out.add_term(e(x.mode - 1), 1); break;
    case Family::H:
      out.add_term(h(x.mode), -1);
      if (x.mode == 0) out.add_term(c(), 1);
      break;
    case Family::C: out.add_term(c(), 1); break;
    case Family::D:
      out.add_term(d(), 1);
      out.add_term(h(0), Rational(1, 2));
      break;
    default: break;
  }
  return out;
}

/// Spectral flow by s on the affine algebra.
inline LieElement spectral_flow(int s, const GenSymbol& x) {
  if (!in_alphabet(AlgebraId::AffineSl2, x)) {
    throw std::domain_error("spectral flow is defined on the affine algebra only");
  }
  LieElement out;
  switch (x.family) {
    case Family::E: out.add_term(e(x.mode - s), 1); break;
    case Family::F: out.add_term(f(x.mode + s), 1); break;
    case Family::H:
      out.add_term(h(x.mode), 1);
      if (x.mode == 0) out.add_term(c(), -s);
      break;
    case Family::C: out.add_term(c(), 1); break;
    default: break;
  }
  return out;
}

/// Element sum coeff * h^a e^b of the enveloping algebra of the
/// two-dimensional Borel span{h, e} with [h, e] = 2e, stored in the normal
/// form h^a e^b keyed by (a, b).
class BorelWord {
 public:
  using Key = std::pair<int, int>;

  BorelWord() = default;
  static BorelWord monomial(int a, int b, const Rational& coeff = 1) {
    BorelWord w;
    w.terms_.add_term({a, b}, coeff);
    return w;
  }
  static BorelWord scalar(const Rational& s) { return monomial(0, 0, s); }
  static BorelWord gen_h() { return monomial(1, 0); }
  static BorelWord gen_e() { return monomial(0, 1); }

  const LinComb<Key>& terms() const { return terms_; }
  bool is_zero() const { return terms_.is_zero(); }

  friend BorelWord operator+(BorelWord a, const BorelWord& b) {
    a.terms_ += b.terms_;
    return a;
  }
  friend BorelWord operator-(BorelWord a, const BorelWord& b) {
    a.terms_ -= b.terms_;
    return a;
  }
  friend BorelWord operator*(const Rational& s, BorelWord a) {
    a.terms_ *= s;
    return a;
  }
  friend bool operator==(const BorelWord& a, const BorelWord& b) { return a.terms_ == b.terms_; }

  // e^b h^c = (h - 2b)^c e^b.
  friend BorelWord operator*(const BorelWord& x, const BorelWord& y) {
    BorelWord out;
    for (const auto& [kx, cx] : x.terms_) {
      for (const auto& [ky, cy] : y.terms_) {
        const auto [a, b] = kx;
        const auto [cc, dd] = ky;
        for (int j = 0; j <= cc; ++j) {
          Rational coeff = cx * cy * binomial(cc, j) * power(Rational(-2 * b), cc - j);
          out.terms_.add_term({a + j, b + dd}, coeff);
        }
      }
    }
    return out;
  }

  friend BorelWord commutator(const BorelWord& x, const BorelWord& y) { return x * y - y * x; }

  std::string to_string() const {
    if (terms_.is_zero()) return "0";
    std::string out;
    for (const auto& [k, coeff] : terms_) {
      if (!out.empty()) out += " + ";
      out += format_rational(coeff);
      if (k.first) out += "*h^" + std::to_string(k.first);
      if (k.second) out += "*e^" + std::to_string(k.second);
    }
    return out;
  }

 private:
  LinComb<Key> terms_;
};

/// Homomorphism from the algebra spanned by T(i) and d onto the enveloping
/// algebra of the two-dimensional Borel, attached to a finite set of negative
/// integers s and a nowhere-vanishing function chi on s and {0}.
class PhiChiS {
 public:
  PhiChiS(std::set<int> s_set, std::map<int, Rational> chi)
      : s_(std::move(s_set)), chi_(std::move(chi)) {
    if (s_.empty()) throw std::domain_error("s must be non-empty");
    int g = 0;
    for (int i : s_) {
      if (i >= 0) throw std::domain_error("s must consist of negative integers");
      g = std::gcd(g, -i);
    }
    r_ = g;
    std::set<int> support = s_;
    support.insert(0);
    for (int i : support) {
      auto it = chi_.find(i);
      if (it == chi_.end() || it->second == 0) {
        throw std::domain_error("chi must be nonzero on s and 0");
      }
    }
    for (const auto& [i, v] : chi_) {
      if (!support.count(i)) throw std::domain_error("chi given outside s and 0");
    }
  }

  int r() const { return r_; }

  BorelWord operator()(const GenSymbol& x) const {
    if (x.family == Family::D) {
      return BorelWord::monomial(1, 0, Rational(-r_) / 2);
    }
    if (x.family != Family::T) {
      throw std::domain_error("phi_chi_s is defined on T(i) and d only");
    }
    auto it = chi_.find(x.mode);
    if (it == chi_.end()) return {};
    // -i / r is a non-negative integer for i in s and 0.
    return BorelWord::monomial(0, -x.mode / r_, it->second);
  }

  BorelWord operator()(const LieElement& x) const {
    BorelWord out;
    for (const auto& [g, coeff] : x) out = out + coeff * (*this)(g);
    return out;
  }

 private:
  std::set<int> s_;
  std::map<int, Rational> chi_;
  int r_ = 1;
};

}  // namespace whittaker
