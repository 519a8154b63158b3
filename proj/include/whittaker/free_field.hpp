#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "whittaker/whittaker_modules.hpp"

namespace whittaker {

/// Basis vector of the Weyl and Heisenberg Fock-type modules. Entries are
/// stored in decreasing order:
///   a     holds n for each factor a(-n), n >= 1;
///   astar holds m for each factor a*(1-m), m >= 1;
///   b     holds n for each factor b(-n), n >= 1.
struct FreeFieldLabel {
  std::vector<int> a, astar, b;

  int depth() const {
    int total = 0;
    for (int n : a) total += n;
    for (int m : astar) total += m - 1;
    for (int n : b) total += n;
    return total;
  }
  int length() const { return static_cast<int>(a.size() + astar.size() + b.size()); }

  friend auto operator<=>(const FreeFieldLabel&, const FreeFieldLabel&) = default;
  friend bool operator==(const FreeFieldLabel&, const FreeFieldLabel&) = default;
};

inline std::string format_free_field(const FreeFieldLabel& l) {
  std::string out;
  auto emit = [&](const std::vector<int>& part, const char* name, int shift) {
    std::size_t i = 0;
    while (i < part.size()) {
      std::size_t j = i;
      while (j < part.size() && part[j] == part[i]) ++j;
      out += std::string(name) + "(" + std::to_string(shift - part[i]) + ")";
      if (j - i > 1) out += "^" + std::to_string(j - i);
      out += "·";
      i = j;
    }
  };
  emit(l.a, "a", 0);
  emit(l.astar, "a*", 1);
  emit(l.b, "b", 0);
  return out + "v";
}

namespace detail {

inline void insert_desc(std::vector<int>& part, int value) {
  part.insert(std::upper_bound(part.begin(), part.end(), value, std::greater<int>()), value);
}

// Removes one copy of value; returns the multiplicity before removal.
inline int remove_one(std::vector<int>& part, int value) {
  auto range = std::equal_range(part.begin(), part.end(), value, std::greater<int>());
  int count = static_cast<int>(range.second - range.first);
  if (count > 0) part.erase(range.first);
  return count;
}

}  // namespace detail

/// Free-field modules built from the Weyl algebra [a(n), a*(m)] = delta_{n+m,0}
/// and, optionally, a Heisenberg field b with [b(n), b(m)] = 2(kappa+2) n delta.
///
///   WeylOnly:  M1(lambda, mu) with a(0) = lambda, a*(1) = mu on v1; it carries
///              the one-sided Borel action phi(n), e(n) = a(n), c = 1.
///   TensorN1:  M1(lambda, mu) (x) N1 with b(0) = chi_0, b(1) = chi_1, b(n>=2) = 0.
///   OneDimChi: M1(lambda, mu) (x) C_chi at the critical level, b(n) = chi_n.
///
/// In the last two the affine algebra acts through the Wakimoto fields.
class FreeFieldModule {
 public:
  enum class Variant { WeylOnly, TensorN1, OneDimChi };
  using Label = FreeFieldLabel;
  using Vector = LinComb<FreeFieldLabel>;

  static FreeFieldModule weyl(Rational lambda, Rational mu) {
    return FreeFieldModule(Variant::WeylOnly, std::move(lambda), std::move(mu), 0, {});
  }
  static FreeFieldModule tensor_n1(Rational lambda, Rational mu, Rational chi0, Rational chi1,
                                   Rational kappa) {
    return FreeFieldModule(Variant::TensorN1, std::move(lambda), std::move(mu), std::move(kappa),
                           LaurentData::weight1({{0, chi0}, {1, chi1}}));
  }
  /// chi uses the weight-one convention chi(z) = sum chi_n z^(-n-1).
  static FreeFieldModule one_dim_chi(Rational lambda, Rational mu, Rational kappa,
                                     LaurentData chi) {
    if (kappa != -2) {
      throw std::domain_error("a one-dimensional Heisenberg module needs the critical level");
    }
    if (chi.convention != LaurentData::Convention::Weight1) {
      throw std::domain_error("chi must use the weight-one convention");
    }
    return FreeFieldModule(Variant::OneDimChi, std::move(lambda), std::move(mu), -2,
                           std::move(chi));
  }

  Variant variant() const { return variant_; }
  const Rational& lambda() const { return lambda_; }
  const Rational& mu() const { return mu_; }
  const LaurentData& chi() const { return chi_; }
  Rational level() const { return kappa_; }
  AlgebraId algebra() const {
    return variant_ == Variant::WeylOnly ? AlgebraId::Borel1 : AlgebraId::AffineSl2;
  }

  Vector cyclic() const { return Vector::unit({}); }

  int mode_bound(const Vector& v) const {
    int extra = variant_ == Variant::OneDimChi ? std::max(0, chi_.max_mode()) : 1;
    return max_depth_of(v, [](const Label& l) { return l.depth(); }) + 2 + extra;
  }

  // Primitive generators.

  Vector a(int n, const Vector& v) const {
    return apply_linear(v, [&](const Label& l) { return a_label(n, l); });
  }
  Vector astar(int n, const Vector& v) const {
    return apply_linear(v, [&](const Label& l) { return astar_label(n, l); });
  }
  Vector b(int n, const Vector& v) const {
    return apply_linear(v, [&](const Label& l) { return b_label(n, l); });
  }
  Vector phi_mode(int n, const Vector& v) const {
    return apply_linear(v, [&](const Label& l) { return cached(Family::Phi, n, l); });
  }

  /// Affine action through the Wakimoto fields; in the WeylOnly variant the
  /// one-sided Borel algebra (phi, e, c) acts instead.
  Vector act(const GenSymbol& g, const Vector& v) const {
    if (!in_alphabet(algebra(), g)) {
      throw std::domain_error("symbol " + to_string(g) + " does not act on this module");
    }
    if (g.family == Family::C) {
      return (variant_ == Variant::WeylOnly ? Rational(1) : kappa_) * v;
    }
    if (g.family == Family::E) return a(g.mode, v);
    return apply_linear(v, [&](const Label& l) { return cached(g.family, g.mode, l); });
  }

  /// Labels with depth and length inside the box.
  std::vector<Label> box(const TruncationBox& box) const {
    struct Slot {
      int kind;  // 0: a, 1: astar, 2: b
      int entry;
      int depth;
    };
    std::vector<Slot> slots;
    for (int n = 1; n <= box.max_depth; ++n) slots.push_back({0, n, n});
    for (int m = 1; m <= box.max_depth + 1; ++m) slots.push_back({1, m, m - 1});
    if (variant_ == Variant::TensorN1) {
      for (int n = 1; n <= box.max_depth; ++n) slots.push_back({2, n, n});
    }
    std::vector<Label> out;
    Label current;
    std::function<void(std::size_t, int, int)> rec = [&](std::size_t start, int depth, int len) {
      out.push_back(current);
      if (len >= box.max_length) return;
      for (std::size_t i = start; i < slots.size(); ++i) {
        const Slot& s = slots[i];
        if (depth + s.depth > box.max_depth) continue;
        auto& part = s.kind == 0 ? current.a : s.kind == 1 ? current.astar : current.b;
        detail::insert_desc(part, s.entry);
        rec(i, depth + s.depth, len + 1);
        detail::remove_one(part, s.entry);
      }
    };
    rec(0, 0, 0);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  FreeFieldModule(Variant variant, Rational lambda, Rational mu, Rational kappa, LaurentData chi)
      : variant_(variant), lambda_(std::move(lambda)), mu_(std::move(mu)),
        kappa_(std::move(kappa)), chi_(std::move(chi)) {}

  Vector a_label(int n, const Label& l) const {
    Vector out;
    if (n <= -1) {
      Label x = l;
      detail::insert_desc(x.a, -n);
      out.add_term(x, 1);
      return out;
    }
    Label x = l;
    int count = detail::remove_one(x.astar, n + 1);
    if (count) out.add_term(x, count);
    if (n == 0) out.add_term(l, lambda_);
    return out;
  }

  Vector astar_label(int n, const Label& l) const {
    Vector out;
    if (n <= 0) {
      Label x = l;
      detail::insert_desc(x.astar, 1 - n);
      out.add_term(x, 1);
      return out;
    }
    Label x = l;
    int count = detail::remove_one(x.a, n);
    if (count) out.add_term(x, -count);
    if (n == 1) out.add_term(l, mu_);
    return out;
  }

  Vector b_label(int n, const Label& l) const {
    Vector out;
    switch (variant_) {
      case Variant::WeylOnly: throw std::domain_error("no Heisenberg factor in this module");
      case Variant::OneDimChi: out.add_term(l, chi_.at(n)); return out;
      case Variant::TensorN1: break;
    }
    if (n <= -1) {
      Label x = l;
      detail::insert_desc(x.b, -n);
      out.add_term(x, 1);
      return out;
    }
    if (n == 0) {
      out.add_term(l, chi_.at(0));
      return out;
    }
    Label x = l;
    int count = detail::remove_one(x.b, n);
    if (count) out.add_term(x, 2 * (kappa_ + 2) * n * count);
    if (n == 1) out.add_term(l, chi_.at(1));
    return out;
  }

  // -2 sum_j :a*(n-j) a(j):, with a(j) on the left exactly when j <= -1.
  Vector phi_label(int n, const Label& l) const {
    Vector v = Vector::unit(l);
    int w = l.depth();
    Vector out;
    for (int j = std::min(n - w - 1, 0); j <= w; ++j) {
      if (j <= -1) {
        out.add_scaled(a(j, astar(n - j, v)), -2);
      } else {
        out.add_scaled(astar(n - j, a(j, v)), -2);
      }
    }
    return out;
  }

  Vector h_label(int n, const Label& l) const {
    Vector out = phi_label(n, l);
    out += b(n, Vector::unit(l));
    return out;
  }

  // -:a* a* a:(n) - kappa n a*(n) + sum_k a*(k) b(n-k).
  Vector f_label(int n, const Label& l) const {
    Vector v = Vector::unit(l);
    const int w = l.depth();
    const int top = w + 1;  // a*(k) v = 0 for k > top at any depth <= w
    Vector out;
    for (int j = std::min(n - 2 * top, 0); j <= w; ++j) {
      if (j <= -1) {
        for (int k1 = n - j - top; k1 <= top; ++k1) {
          out.add_scaled(a(j, astar(k1, astar(n - j - k1, v))), -1);
        }
      } else {
        Vector av = a(j, v);
        if (av.is_zero()) continue;
        for (int k1 = n - j - top; k1 <= top; ++k1) {
          out.add_scaled(astar(k1, astar(n - j - k1, av)), -1);
        }
      }
    }
    out.add_scaled(astar(n, v), -kappa_ * n);
    if (variant_ == Variant::OneDimChi) {
      for (const auto& [m, chi_m] : chi_.coeffs) {
        int k = n - m;
        if (k > top) continue;
        out.add_scaled(astar(k, v), chi_m);
      }
    } else {
      for (int k = n - top; k <= top; ++k) out += astar(k, b(n - k, v));
    }
    return out;
  }

  const Vector& cached(Family fam, int n, const Label& l) const {
    auto key = std::make_tuple(fam, n, l);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Vector out;
    switch (fam) {
      case Family::H: out = h_label(n, l); break;
      case Family::F: out = f_label(n, l); break;
      case Family::Phi: out = phi_label(n, l); break;
      default: throw std::logic_error("no cached field for this family");
    }
    return cache_.emplace(std::move(key), std::move(out)).first->second;
  }

  Variant variant_;
  Rational lambda_, mu_, kappa_;
  LaurentData chi_;
  mutable std::map<std::tuple<Family, int, Label>, Vector> cache_;
};

/// Module twisted by spectral flow: x acts as spectral_flow(s, x).
template <AffineModule M>
class SpectralFlowTwist {
 public:
  using Label = typename M::Label;
  using Vector = typename M::Vector;

  SpectralFlowTwist(const M& base, int s) : base_(base), s_(s) {}

  Vector act(const GenSymbol& g, const Vector& v) const {
    return act_element(base_, spectral_flow(s_, g), v);
  }
  Rational level() const { return base_.level(); }
  int mode_bound(const Vector& v) const { return base_.mode_bound(v) + std::abs(s_); }
  Vector cyclic() const { return base_.cyclic(); }

 private:
  const M& base_;
  int s_;
};

/// Generalized Whittaker conditions of depth p >= 1 for the module
/// M1(lambda, mu) (x) C_chi with chi supported in modes n <= p, listed as
/// (x, eigenvalue); the vanishing conditions run up to `top`.
inline std::vector<WhittakerCondition> generalized_conditions(const Rational& lambda,
                                                              const Rational& mu,
                                                              const LaurentData& chi, int p,
                                                              int top) {
  std::vector<WhittakerCondition> out;
  out.push_back({LieElement::unit(e(0)), lambda});
  if (p == 1) {
    out.push_back({LieElement::unit(h(1)), chi.at(1) - 2 * lambda * mu});
    out.push_back({LieElement::unit(f(2)), mu * (chi.at(1) - lambda * mu)});
  } else {
    out.push_back({LieElement::unit(h(1)), chi.at(1) - 2 * lambda * mu});
    for (int k = 2; k <= p; ++k) out.push_back({LieElement::unit(h(k)), chi.at(k)});
    out.push_back({LieElement::unit(f(p + 1)), mu * chi.at(p)});
  }
  for (int n = 1; n <= top; ++n) {
    out.push_back({LieElement::unit(e(n)), 0});
    out.push_back({LieElement::unit(h(n + p)), 0});
    out.push_back({LieElement::unit(f(n + p + 1)), 0});
  }
  return out;
}

/// The same conditions read in the module twisted by s, where x acts as
/// spectral_flow(s, x): each x is replaced by spectral_flow(-s, x), so e(0)
/// becomes e(s) and f(p+1) becomes f(p+1-s).
inline std::vector<WhittakerCondition> twist_conditions(
    const std::vector<WhittakerCondition>& conds, int s) {
  std::vector<WhittakerCondition> out;
  for (const auto& cond : conds) {
    out.push_back({map_linear(cond.x, [s](const GenSymbol& g) { return spectral_flow(-s, g); }),
                   cond.value});
  }
  return out;
}

/// Residuals x . v - value v for each condition.
template <AffineModule M>
std::vector<typename M::Vector> condition_residuals(const M& mod,
                                                    const std::vector<WhittakerCondition>& conds,
                                                    const typename M::Vector& v) {
  std::vector<typename M::Vector> out;
  for (const auto& cond : conds) {
    auto r = act_element(mod, cond.x, v);
    r.add_scaled(v, -cond.value);
    out.push_back(std::move(r));
  }
  return out;
}

/// Invariants that separate non-isomorphic Wakimoto-type modules at the
/// critical level: the eigenvalues read off on v and the central character.
struct Fingerprint {
  std::vector<std::pair<std::string, Rational>> eigenvalues;
  LaurentData central_character;
  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

/// Reads eigenvalues on v by acting and extracting the scalar; throws if v is
/// not an eigenvector for one of the listed operators.
inline Fingerprint nonisomorphism_fingerprint(const FreeFieldModule& mod, int p) {
  if (mod.variant() != FreeFieldModule::Variant::OneDimChi) {
    throw std::domain_error("fingerprints are defined for the critical one-dimensional variant");
  }
  Fingerprint fp;
  auto v = mod.cyclic();
  auto read = [&](const GenSymbol& g) {
    auto out = mod.act(g, v);
    Rational s = out.coeff({});
    if (!(out == s * v)) throw std::domain_error(to_string(g) + " does not act by a scalar on v");
    fp.eigenvalues.emplace_back(to_string(g), s);
  };
  read(e(0));
  for (int k = 1; k <= p; ++k) read(h(k));
  read(f(p + 1));
  fp.central_character = central_character_from_chi(mod.chi());
  return fp;
}

/// Outcome of the generation test for M1(lambda, mu) as a module over the
/// one-sided Borel algebra.
struct CyclicityReport {
  std::size_t box_size = 0;
  std::size_t reached = 0;  // box labels inside the span of words applied to v1
  bool full_rank = false;
  struct Sample {
    LinComb<FreeFieldLabel> vector;
    bool regenerates = false;
  };
  std::vector<Sample> samples;
  bool all_regenerate() const {
    return std::all_of(samples.begin(), samples.end(),
                       [](const Sample& s) { return s.regenerates; });
  }
};

/// (i) words of length <= max_length + 1 in phi(n), a(n) with |n| <= max_depth + 1
/// applied to v1 span the box; (ii) from each random nonzero box vector, the
/// closure under phi(n), a(n) with 0 <= n <= max_depth + 1 contains v1.
inline CyclicityReport cyclicity_probe(const FreeFieldModule& mod, const TruncationBox& box,
                                       std::uint64_t seed, int samples = 4) {
  if (mod.variant() != FreeFieldModule::Variant::WeylOnly) {
    throw std::domain_error("the cyclicity probe runs on the Weyl module");
  }
  if (mod.lambda() == 0) throw std::domain_error("cyclicity needs lambda != 0");
  using Vector = FreeFieldModule::Vector;
  const int top = box.max_depth + 1;
  std::vector<GenSymbol> gens;
  for (int n = -top; n <= top; ++n) {
    gens.push_back(phi(n));
    gens.push_back(e(n));
  }

  CyclicityReport report;
  auto labels = mod.box(box);
  report.box_size = labels.size();

  RowEchelon<FreeFieldLabel> span;
  std::vector<Vector> layer{mod.cyclic()};
  span.insert(mod.cyclic());
  auto count_reached = [&] {
    std::size_t n = 0;
    for (const auto& l : labels) n += span.contains(Vector::unit(l)) ? 1 : 0;
    return n;
  };
  // a*(-1)^2 v already needs words of length max_length + 2.
  const int max_word = 2 * box.max_length + 2;
  report.reached = count_reached();
  for (int len = 1; len <= max_word && report.reached < labels.size(); ++len) {
    std::vector<Vector> next;
    for (const auto& v : layer) {
      for (const auto& g : gens) {
        auto x = mod.act(g, v);
        if (x.is_zero()) continue;
        if (span.insert(x)) next.push_back(std::move(x));
      }
    }
    layer = std::move(next);
    report.reached = count_reached();
  }
  report.full_rank = report.reached == report.box_size;

  std::vector<GenSymbol> down;
  for (int n = 0; n <= top; ++n) {
    down.push_back(phi(n));
    down.push_back(e(n));
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coeff(-3, 3);
  for (int s = 0; s < samples; ++s) {
    Vector v;
    while (v.is_zero()) {
      for (const auto& l : labels) v.add_term(l, coeff(rng));
    }
    RowEchelon<FreeFieldLabel> closure;
    closure.insert(v);
    std::vector<Vector> frontier{v};
    while (!frontier.empty() && !closure.contains(mod.cyclic())) {
      std::vector<Vector> next;
      for (const auto& x : frontier) {
        for (const auto& g : down) {
          auto y = mod.act(g, x);
          if (!y.is_zero() && closure.insert(y)) next.push_back(std::move(y));
        }
      }
      frontier = std::move(next);
    }
    report.samples.push_back({v, closure.contains(mod.cyclic())});
  }
  return report;
}

}  // namespace whittaker
