#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "whittaker/pbw_module.hpp"
#include "whittaker/quadratic_fields.hpp"

namespace whittaker {

struct WhittakerParams {
  Rational lambda = 0;
  Rational mu = 0;
  Rational kappa = 0;
  Rational kappa1 = 0;  // Virasoro central charge, Borel-Virasoro modules only
};

namespace detail {

inline int family_rank(Family fam) {
  switch (fam) {
    case Family::E: return 0;
    case Family::H: return 1;
    case Family::F: return 2;
    default: return 3;
  }
}

// e-block, then h-block, then f-block; inside a block the most negative mode
// comes first.
inline bool affine_lowering_order(const GenSymbol& a, const GenSymbol& b) {
  int ra = family_rank(a.family), rb = family_rank(b.family);
  if (ra != rb) return ra < rb;
  return a.mode < b.mode;
}

}  // namespace detail

/// Universal Whittaker module over the affine algebra: the quotient of U(g)
/// by the left ideal fixing e(0) = lambda, f(1) = mu, c = kappa and killing
/// all other positive-side generators. Basis u_{i,j,k} . w.
class UniversalModule {
 public:
  using Label = Monomial;
  using Vector = ModVector;

  explicit UniversalModule(WhittakerParams p) : params_(p), engine_(make_rules(p)) {}

  Vector act(const GenSymbol& g, const Vector& v) const { return engine_.act(g, v); }
  Vector act(const LieElement& x, const Vector& v) const { return engine_.act(x, v); }
  Vector cyclic() const { return Vector::unit({}); }
  Rational level() const { return params_.kappa; }
  const WhittakerParams& params() const { return params_; }
  AlgebraId algebra() const { return AlgebraId::AffineSl2; }

  int mode_bound(const Vector& v) const { return max_depth_of(v, monomial_depth) + 1; }

  static std::vector<GenSymbol> lowering_generators(int max_depth) {
    std::vector<GenSymbol> gens;
    for (int n = max_depth; n >= 1; --n) gens.push_back(e(-n));
    for (int n = max_depth; n >= 0; --n) gens.push_back(h(-n));
    for (int n = max_depth; n >= 0; --n) gens.push_back(f(-n));
    return gens;
  }

  std::vector<Label> box(const TruncationBox& b) const {
    return enumerate_monomials(lowering_generators(b.max_depth), b);
  }

  static bool is_lowering(const GenSymbol& g) {
    switch (g.family) {
      case Family::E: return g.mode <= -1;
      case Family::H:
      case Family::F: return g.mode <= 0;
      default: return false;
    }
  }

 private:
  static PbwRules make_rules(const WhittakerParams& p) {
    PbwRules r;
    r.algebra = AlgebraId::AffineSl2;
    r.lowering = is_lowering;
    r.order = detail::affine_lowering_order;
    r.on_cyclic = [p](const GenSymbol& g) {
      if (g == e(0)) return ModVector(Monomial{}, p.lambda);
      if (g == f(1)) return ModVector(Monomial{}, p.mu);
      return ModVector{};
    };
    r.central = [p](const GenSymbol&) { return p.kappa; };
    return r;
  }

  WhittakerParams params_;
  PbwEngine engine_;
};

/// Universal Whittaker module over the Borel-Virasoro algebra with
/// e(0) = lambda, L(1) = mu, c = kappa, c1 = kappa1.
class BorelVirModule {
 public:
  using Label = Monomial;
  using Vector = ModVector;

  explicit BorelVirModule(WhittakerParams p) : params_(p), engine_(make_rules(p)) {}

  Vector act(const GenSymbol& g, const Vector& v) const { return engine_.act(g, v); }
  Vector cyclic() const { return Vector::unit({}); }
  Rational level() const { return params_.kappa; }
  const WhittakerParams& params() const { return params_; }
  AlgebraId algebra() const { return AlgebraId::BorelVir; }
  int mode_bound(const Vector& v) const { return max_depth_of(v, monomial_depth) + 1; }

  static bool is_lowering(const GenSymbol& g) {
    switch (g.family) {
      case Family::E: return g.mode <= -1;
      case Family::H:
      case Family::L: return g.mode <= 0;
      default: return false;
    }
  }

  /// Block index: h(-n) and L(-n) sit in block n, e(-n-1) in block n.
  static int block(const GenSymbol& g) { return g.family == Family::E ? -g.mode - 1 : -g.mode; }

  /// Position inside the exponent vector: slots 3n+3, 3n+2, 3n+1 hold
  /// h(-n), L(-n), e(-n-1).
  static int slot(const GenSymbol& g) {
    int n = block(g);
    switch (g.family) {
      case Family::H: return 3 * n + 3;
      case Family::L: return 3 * n + 2;
      default: return 3 * n + 1;
    }
  }

  static GenSymbol symbol_of_slot(int s) {
    int n = (s - 1) / 3;
    switch ((s - 1) % 3) {
      case 0: return e(-n - 1);
      case 1: return L(-n);
      default: return h(-n);
    }
  }

  static ExponentVector exponents(const Monomial& m) {
    ExponentVector v;
    for (const auto& g : m) v.add(slot(g), 1);
    return v;
  }

  /// The monomial u_i, highest block leftmost and h, L, e inside a block.
  static Monomial monomial_of(const ExponentVector& v) {
    Monomial m;
    for (const auto& [s, count] : v.entries()) {
      for (int i = 0; i < count; ++i) m.push_back(symbol_of_slot(s));
    }
    std::sort(m.begin(), m.end(), order);
    return m;
  }

  static bool order(const GenSymbol& a, const GenSymbol& b) {
    int ba = block(a), bb = block(b);
    if (ba != bb) return ba > bb;
    auto within = [](Family fam) {
      return fam == Family::H ? 0 : fam == Family::L ? 1 : 2;
    };
    return within(a.family) < within(b.family);
  }

  std::vector<Label> box(const TruncationBox& b) const {
    std::vector<GenSymbol> gens;
    for (int n = b.max_depth; n >= 0; --n) {
      gens.push_back(h(-n));
      gens.push_back(L(-n));
      if (n + 1 <= b.max_depth) gens.push_back(e(-n - 1));
    }
    std::sort(gens.begin(), gens.end(), order);
    return enumerate_monomials(gens, b);
  }

 private:
  static PbwRules make_rules(const WhittakerParams& p) {
    PbwRules r;
    r.algebra = AlgebraId::BorelVir;
    r.lowering = is_lowering;
    r.order = order;
    r.on_cyclic = [p](const GenSymbol& g) {
      if (g == e(0)) return ModVector(Monomial{}, p.lambda);
      if (g == L(1)) return ModVector(Monomial{}, p.mu);
      return ModVector{};
    };
    r.central = [p](const GenSymbol& g) { return g.family == Family::C ? p.kappa : p.kappa1; };
    return r;
  }

  WhittakerParams params_;
  PbwEngine engine_;
};

/// Critical-level quotient of the universal module in which the
/// Segal-Sugawara modes act by scalars: T(n) = c_n for n <= 0, T(1) = lambda mu,
/// T(n) = 0 for n >= 2. Basis: e/h monomials applied to the image of w.
class CriticalQuotient {
 public:
  using Label = Monomial;
  using Vector = ModVector;

  CriticalQuotient(Rational lambda, Rational mu, LaurentData c)
      : lambda_(std::move(lambda)), mu_(std::move(mu)), c_(std::move(c)),
        universal_(WhittakerParams{lambda_, mu_, -2, 0}) {
    if (lambda_ == 0) throw std::domain_error("the critical quotient needs lambda != 0");
    if (c_.convention != LaurentData::Convention::Weight2) {
      throw std::domain_error("c(z) must use the weight-two convention");
    }
    for (const auto& [n, v] : c_.coeffs) {
      if (n > 0) throw std::domain_error("c(z) may only carry modes n <= 0");
    }
    engine_ = std::make_unique<PbwEngine>(make_rules());
  }
  CriticalQuotient(const CriticalQuotient&) = delete;
  CriticalQuotient& operator=(const CriticalQuotient&) = delete;

  Vector act(const GenSymbol& g, const Vector& v) const { return engine_->act(g, v); }
  Vector act(const LieElement& x, const Vector& v) const { return engine_->act(x, v); }
  Vector cyclic() const { return Vector::unit({}); }
  Rational level() const { return -2; }
  AlgebraId algebra() const { return AlgebraId::AffineSl2; }
  const Rational& lambda() const { return lambda_; }
  const Rational& mu() const { return mu_; }
  const LaurentData& c_series() const { return c_; }

  /// Scalar by which T(n) acts.
  Rational t_character(int n) const {
    if (n <= 0) return c_.at(n);
    return n == 1 ? lambda_ * mu_ : Rational(0);
  }

  int mode_bound(const Vector& v) const { return max_depth_of(v, monomial_depth) + 1; }

  static bool is_lowering(const GenSymbol& g) {
    return (g.family == Family::E && g.mode <= -1) || (g.family == Family::H && g.mode <= 0);
  }

  std::vector<Label> box(const TruncationBox& b) const {
    std::vector<GenSymbol> gens;
    for (int n = b.max_depth; n >= 1; --n) gens.push_back(e(-n));
    for (int n = b.max_depth; n >= 0; --n) gens.push_back(h(-n));
    return enumerate_monomials(gens, b);
  }

  /// Image in the quotient of a vector of the critical universal module.
  Vector project(const ModVector& v) const {
    Vector out;
    for (const auto& [m, coeff] : v) out.add_scaled(project_monomial(m), coeff);
    return out;
  }

 private:
  Vector project_monomial(const Monomial& m) const {
    Vector v = cyclic();
    for (auto it = m.rbegin(); it != m.rend(); ++it) v = act(*it, v);
    return v;
  }

  // f(m) w for m <= 0 from T(m) w = c_m w; T(m) w in the universal module is
  // lambda f(m) w plus terms whose f factors have larger modes.
  Vector solve_f(int m) const {
    QuadraticFields<UniversalModule> q(universal_);
    ModVector tw = q.T(m, universal_.cyclic());
    const Monomial target{f(m)};
    if (tw.coeff(target) != lambda_) {
      throw std::logic_error("unexpected f coefficient in T(" + std::to_string(m) + ") w");
    }
    Vector rest;
    for (const auto& [mono, coeff] : tw) {
      if (mono == target) continue;
      for (const auto& g : mono) {
        if (g.family == Family::F && g.mode <= m) {
          throw std::logic_error("triangularity violated in T(" + std::to_string(m) + ") w");
        }
      }
      rest.add_scaled(project_monomial(mono), coeff);
    }
    Vector out(Monomial{}, c_.at(m));
    out -= rest;
    return Rational(1) / lambda_ * out;
  }

  PbwRules make_rules() const {
    PbwRules r;
    r.algebra = AlgebraId::AffineSl2;
    r.lowering = is_lowering;
    r.order = detail::affine_lowering_order;
    r.on_cyclic = [this](const GenSymbol& g) -> ModVector {
      if (g == e(0)) return ModVector(Monomial{}, lambda_);
      if (g == f(1)) return ModVector(Monomial{}, mu_);
      if (g.family == Family::F && g.mode <= 0) return solve_f(g.mode);
      return {};
    };
    r.central = [](const GenSymbol&) { return Rational(-2); };
    return r;
  }

  Rational lambda_, mu_;
  LaurentData c_;
  UniversalModule universal_;
  std::unique_ptr<PbwEngine> engine_;
};

/// Induced module C[d] (x) M over the extended algebra: d multiplies by d and
/// x(n) (d^k (x) m) = (d - n)^k (x) x(n) m.
template <AffineModule Base>
class InducedModule {
 public:
  using BaseLabel = typename Base::Label;
  using Label = std::pair<int, BaseLabel>;
  using Vector = LinComb<Label>;

  explicit InducedModule(const Base& base) : base_(base) {}

  Vector embed(const typename Base::Vector& v, int dpow = 0) const {
    return v.map_labels([dpow](const BaseLabel& l) { return Label{dpow, l}; });
  }

  Vector act(const GenSymbol& g, const Vector& v) const {
    Vector out;
    for (const auto& [label, coeff] : v) out.add_scaled(act_label(g, label), coeff);
    return out;
  }

  Rational level() const { return base_.level(); }
  AlgebraId algebra() const { return AlgebraId::ExtendedSl2; }

  int mode_bound(const Vector& v) const {
    typename Base::Vector flat;
    for (const auto& [label, coeff] : v) flat.add_term(label.second, 1);
    return base_.mode_bound(flat);
  }

  const Base& base() const { return base_; }

 private:
  Vector act_label(const GenSymbol& g, const Label& label) const {
    const auto& [k, m] = label;
    if (g.family == Family::D) return Vector(Label{k + 1, m}, 1);
    auto xm = base_.act(g, Base::Vector::unit(m));
    if (g.family == Family::C || g.family == Family::C1) return embed(xm, k);
    Vector out;
    for (int j = 0; j <= k; ++j) {
      Rational coeff = binomial(k, j) * power(Rational(-g.mode), k - j);
      out.add_scaled(embed(xm, j), coeff);
    }
    return out;
  }

  const Base& base_;
};

/// Noncritical module extended by letting d act as -L(0) + a.
template <AffineModule Base>
class DerivationExtension {
 public:
  using Label = typename Base::Label;
  using Vector = typename Base::Vector;

  DerivationExtension(const Base& base, Rational a) : base_(base), a_(std::move(a)), q_(base) {}

  Vector act(const GenSymbol& g, const Vector& v) const {
    if (g.family == Family::D) return a_ * v - q_.L(0, v);
    return base_.act(g, v);
  }
  Rational level() const { return base_.level(); }
  int mode_bound(const Vector& v) const { return base_.mode_bound(v); }

 private:
  const Base& base_;
  Rational a_;
  QuadraticFields<Base> q_;
};

/// Casimir operator 2(c+2)d + h(0)^2/2 + h(0) + 2 f(0)e(0)
///   + 2 sum_{n>=1} (e(-n)f(n) + f(-n)e(n) + h(-n)h(n)/2).
template <AffineModule M>
typename M::Vector casimir(const M& mod, const typename M::Vector& v) {
  using V = typename M::Vector;
  Rational k2 = Rational(mod.level()) + 2;
  V out;
  if (k2 != 0) out.add_scaled(mod.act(d(), v), 2 * k2);
  V h0 = mod.act(h(0), v);
  out.add_scaled(mod.act(h(0), h0), Rational(1, 2));
  out += h0;
  out.add_scaled(mod.act(f(0), mod.act(e(0), v)), 2);
  int bound = mod.mode_bound(v);
  for (int n = 1; n <= bound; ++n) {
    out.add_scaled(mod.act(e(-n), mod.act(f(n), v)), 2);
    out.add_scaled(mod.act(f(-n), mod.act(e(n), v)), 2);
    out.add_scaled(mod.act(h(-n), mod.act(h(n), v)), 1);
  }
  return out;
}

/// Searches m <= max_m for positive integers (i, m) with
/// zdot = (((i/m)(kappa+2) - m)^2 - 1)/2. Outside these values the quotient of the
/// induced type-(lambda, 0) module by d - ddot and the Casimir - zdot is simple.
inline std::optional<std::pair<long, long>> casimir_exceptional_pair(const Rational& kappa,
                                                                     const Rational& zdot,
                                                                     long max_m = 64) {
  const Rational k2 = kappa + 2;
  if (k2 == 0) throw std::domain_error("the exceptional Casimir values need kappa != -2");
  Rational s = 2 * zdot + 1;
  if (s < 0 || !mpz_perfect_square_p(s.get_num_mpz_t()) ||
      !mpz_perfect_square_p(s.get_den_mpz_t())) {
    return std::nullopt;
  }
  mpz_class num, den;
  mpz_sqrt(num.get_mpz_t(), s.get_num_mpz_t());
  mpz_sqrt(den.get_mpz_t(), s.get_den_mpz_t());
  const Rational r = Rational(num) / Rational(den);
  for (long m = 1; m <= max_m; ++m) {
    for (const Rational& t : {Rational(m + r), Rational(m - r)}) {
      Rational i = Rational(m) * t / k2;
      if (i > 0 && i.get_den() == 1 && i.get_num().fits_slong_p()) {
        return std::pair{i.get_num().get_si(), m};
      }
    }
  }
  return std::nullopt;
}

/// A Whittaker condition x . v = value . v.
struct WhittakerCondition {
  LieElement x;
  Rational value;
};

/// Conditions e(0) = lambda, f(1) = mu and vanishing of e(n), f(n+1), h(n) for
/// 1 <= n <= top.
inline std::vector<WhittakerCondition> standard_conditions(const Rational& lambda,
                                                           const Rational& mu, int top) {
  std::vector<WhittakerCondition> out;
  out.push_back({LieElement::unit(e(0)), lambda});
  out.push_back({LieElement::unit(f(1)), mu});
  for (int n = 1; n <= top; ++n) {
    out.push_back({LieElement::unit(e(n)), 0});
    out.push_back({LieElement::unit(f(n + 1)), 0});
    out.push_back({LieElement::unit(h(n)), 0});
  }
  return out;
}

template <AffineModule M>
typename M::Vector act_element(const M& mod, const LieElement& x, const typename M::Vector& v) {
  typename M::Vector out;
  for (const auto& [g, coeff] : x) out.add_scaled(mod.act(g, v), coeff);
  return out;
}

/// Basis of the Whittaker vectors of the given type inside the span of `box`.
template <AffineModule M>
std::vector<typename M::Vector> whittaker_vector_solver(
    const M& mod, const std::vector<WhittakerCondition>& conditions,
    const std::vector<typename M::Label>& box) {
  using Label = typename M::Label;
  // Rows are keyed by (condition index, output label); transpose per column.
  using RowKey = std::pair<std::size_t, Label>;
  std::map<RowKey, LinComb<Label>> rows;
  for (const auto& col : box) {
    auto v = M::Vector::unit(col);
    for (std::size_t i = 0; i < conditions.size(); ++i) {
      auto out = act_element(mod, conditions[i].x, v);
      out.add_scaled(v, -conditions[i].value);
      for (const auto& [label, coeff] : out) rows[{i, label}].add_term(col, coeff);
    }
  }
  SparseMatrix<Label> m;
  m.columns = box;
  for (auto& [key, row] : rows) {
    if (!row.is_zero()) m.rows.push_back(std::move(row));
  }
  return kernel(m);
}

/// Slice of a quotient by a cyclic submodule: the submodule generated by
/// `relation` is intersected with the span of the box, and box vectors are
/// reduced modulo that intersection.
template <AffineModule M>
class TruncatedQuotient {
 public:
  using Label = typename M::Label;
  using Vector = typename M::Vector;

  /// `relation_vectors` must span the part of the submodule that can meet the
  /// box; `box` lists the labels kept.
  TruncatedQuotient(std::vector<Label> box, const std::vector<Vector>& relation_vectors)
      : box_(std::move(box)) {
    for (const auto& l : box_) inside_.emplace(l, true);
    for (const auto& r : relation_vectors) ech_.insert(tag(r));
    for (const auto& [pivot, row] : ech_.pivot_rows()) {
      if (pivot.first == 1) relations_in_box_.push_back(untag(row));
    }
    for (const auto& l : box_) {
      if (!ech_.pivot_rows().count({1, l}) ) quotient_basis_.push_back(l);
    }
  }

  /// Normal form of a box vector modulo the relations lying in the box.
  Vector project(const Vector& v) const {
    for (const auto& [label, coeff] : v) {
      if (!inside_.count(label)) throw std::domain_error("vector leaves the truncation box");
    }
    return reduce_inner(v);
  }

  const std::vector<Vector>& relations_in_box() const { return relations_in_box_; }
  const std::vector<Label>& quotient_basis() const { return quotient_basis_; }
  std::size_t dimension() const { return quotient_basis_.size(); }

 private:
  // Labels outside the box get tier 0 so they are eliminated first.
  using Tagged = std::pair<int, Label>;

  LinComb<Tagged> tag(const Vector& v) const {
    return v.map_labels(
        [this](const Label& l) { return Tagged{inside_.count(l) ? 1 : 0, l}; });
  }
  static Vector untag(const LinComb<Tagged>& v) {
    return v.map_labels([](const Tagged& t) { return t.second; });
  }

  Vector reduce_inner(const Vector& v) const { return untag(ech_.reduce(tag(v))); }

  std::vector<Label> box_;
  std::map<Label, bool> inside_;
  RowEchelon<Tagged> ech_;
  std::vector<Vector> relations_in_box_;
  std::vector<Label> quotient_basis_;
};

enum class RelationVariant { Ordinary, H0Half };

/// Generator of the submodule cut out by d = -L(0) + a: (L(0) - a) w, or
/// (h(0)/2 - L(0) - a) w for the second variant.
inline ModVector truncation_relation(const UniversalModule& v, const Rational& a,
                                     RelationVariant variant) {
  QuadraticFields<UniversalModule> q(v);
  ModVector w = v.cyclic();
  ModVector out = q.L(0, w);
  out.add_scaled(w, -a);
  if (variant == RelationVariant::H0Half) {
    out = Rational(1, 2) * v.act(h(0), w) - out;
    out.add_scaled(w, -2 * a);
  }
  return out;
}

/// Truncated quotient of V(lambda, 0, kappa) by the relation above; relation
/// vectors are u . r for u ranging over the box monomials.
inline TruncatedQuotient<UniversalModule> truncated_quotient(const UniversalModule& v,
                                                             const Rational& a,
                                                             RelationVariant variant,
                                                             const TruncationBox& box) {
  if (v.params().mu != 0) throw std::domain_error("truncated quotients need mu = 0");
  if (v.level() == -2) throw std::domain_error("truncated quotients need a noncritical level");
  ModVector r = truncation_relation(v, a, variant);
  std::vector<ModVector> rel;
  for (const auto& u : v.box(box)) {
    ModVector x = r;
    for (auto it = u.rbegin(); it != u.rend(); ++it) x = v.act(*it, x);
    rel.push_back(std::move(x));
  }
  return TruncatedQuotient<UniversalModule>(v.box(box), rel);
}

/// The Borel-Virasoro basis vector u_i . w realized inside an affine module by
/// Sugawara modes for L(-n) and plain actions for h and e.
template <AffineModule M>
typename M::Vector sugawara_basis_vector(const QuadraticFields<M>& q, const Monomial& u) {
  const M& mod = q.module();
  typename M::Vector v = mod.cyclic();
  for (auto it = u.rbegin(); it != u.rend(); ++it) {
    if (it->family == Family::L) {
      v = q.L(it->mode, v);
    } else {
      v = mod.act(*it, v);
    }
  }
  return v;
}

}  // namespace whittaker
