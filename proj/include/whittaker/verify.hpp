#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "whittaker/free_field.hpp"
#include "whittaker/lattice_pi.hpp"
#include "whittaker/report.hpp"
#include "whittaker/whittaker_modules.hpp"

namespace whittaker {

/// Generators of `alg` with |mode| <= bound, the derivation and central
/// elements once each.
inline std::vector<GenSymbol> algebra_generators(AlgebraId alg, int bound) {
  std::vector<GenSymbol> out;
  for (Family fam : {Family::E, Family::F, Family::H, Family::L, Family::T, Family::Phi}) {
    for (int n = -bound; n <= bound; ++n) {
      if (in_alphabet(alg, {fam, n})) out.push_back({fam, n});
    }
  }
  for (GenSymbol g : {d(), c(), c1()}) {
    if (in_alphabet(alg, g)) out.push_back(g);
  }
  return out;
}

/// e(n), f(n), h(n) for |n| <= bound.
inline std::vector<GenSymbol> affine_modes(int bound) {
  std::vector<GenSymbol> out;
  for (Family fam : {Family::E, Family::F, Family::H}) {
    for (int n = -bound; n <= bound; ++n) out.push_back({fam, n});
  }
  return out;
}

namespace detail {

template <class Label>
Json failure(const std::string& where, const LinComb<Label>& residual) {
  return {{"at", where}, {"vector", vector_to_json(residual)}};
}

// Records the first failure only; `count` tracks how many checks ran.
struct Tally {
  std::size_t checked = 0;
  std::size_t failed = 0;
  Json first;

  template <class Label>
  void record(const LinComb<Label>& residual, const std::function<std::string()>& where) {
    ++checked;
    if (residual.is_zero()) return;
    if (failed++ == 0) first = failure(where(), residual);
  }
  Outcome outcome() const {
    Outcome o;
    o.pass = failed == 0;
    o.residual = {{"checked", checked}, {"failed", failed}};
    if (failed) o.residual["first_failure"] = first;
    return o;
  }
};

}  // namespace detail

/// Antisymmetry over all pairs and the Jacobi identity over all unordered
/// triples of generators with |mode| <= bound.
inline Outcome bracket_integrity(AlgebraId alg, int bound) {
  auto gens = algebra_generators(alg, bound);
  detail::Tally tally;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i; j < gens.size(); ++j) {
      const auto& x = gens[i];
      const auto& y = gens[j];
      tally.record(bracket(alg, x, y) + bracket(alg, y, x),
                   [&] { return "antisymmetry " + to_string(x) + ", " + to_string(y); });
      for (std::size_t k = j; k < gens.size(); ++k) {
        const auto& z = gens[k];
        LieElement X = LieElement::unit(x), Y = LieElement::unit(y), Z = LieElement::unit(z);
        LieElement jac = bracket(alg, X, bracket(alg, Y, Z)) + bracket(alg, Y, bracket(alg, Z, X)) +
                         bracket(alg, Z, bracket(alg, X, Y));
        tally.record(jac, [&] {
          return "Jacobi " + to_string(x) + ", " + to_string(y) + ", " + to_string(z);
        });
      }
    }
  }
  return tally.outcome();
}

/// Homomorphism residual [phi x, phi y] - phi [x, y] over generator pairs.
inline Outcome automorphism_check(AlgebraId alg, int bound,
                                  const std::function<LieElement(const GenSymbol&)>& phi) {
  auto gens = algebra_generators(alg, bound);
  detail::Tally tally;
  auto lift = [&](const LieElement& x) { return map_linear(x, phi); };
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      const auto& x = gens[i];
      const auto& y = gens[j];
      LieElement r = bracket(alg, phi(x), phi(y)) - lift(bracket(alg, x, y));
      tally.record(r, [&] { return to_string(x) + ", " + to_string(y); });
    }
  }
  return tally.outcome();
}

/// x(y v) - y(x v) - [x, y] v = 0 for all pairs in `gens` and all box labels.
template <AffineModule M>
Outcome representation_property(const M& mod, AlgebraId alg,
                                 const std::vector<typename M::Label>& labels,
                                 const std::vector<GenSymbol>& gens) {
  detail::Tally tally;
  for (const auto& label : labels) {
    auto v = M::Vector::unit(label);
    std::vector<typename M::Vector> single;
    single.reserve(gens.size());
    for (const auto& g : gens) single.push_back(mod.act(g, v));
    for (std::size_t i = 0; i < gens.size(); ++i) {
      for (std::size_t j = i + 1; j < gens.size(); ++j) {
        auto r = mod.act(gens[i], single[j]) - mod.act(gens[j], single[i]);
        r -= act_element(mod, bracket(alg, gens[i], gens[j]), v);
        tally.record(r, [&] {
          return "[" + to_string(gens[i]) + ", " + to_string(gens[j]) + "] on label " +
                 std::to_string(&label - labels.data());
        });
      }
    }
  }
  return tally.outcome();
}

/// [L(n), x(m)] = -m x(n+m) for |n| <= n_bound and x in `gens`.
template <AffineModule M>
Outcome sugawara_commutators(const QuadraticFields<M>& q,
                             const std::vector<typename M::Label>& labels, int n_bound,
                             const std::vector<GenSymbol>& gens) {
  detail::Tally tally;
  for (const auto& label : labels) {
    auto v = M::Vector::unit(label);
    for (int n = -n_bound; n <= n_bound; ++n) {
      for (const auto& x : gens) {
        tally.record(q.sugawara_residual(n, x, v), [&] {
          return "[L(" + std::to_string(n) + "), " + to_string(x) + "] on label " +
                 std::to_string(&label - labels.data());
        });
      }
    }
  }
  return tally.outcome();
}

/// Virasoro relation for |n|, |m| <= bound on box labels.
template <AffineModule M>
Outcome virasoro_relation(const QuadraticFields<M>& q,
                          const std::vector<typename M::Label>& labels, int bound) {
  detail::Tally tally;
  for (const auto& label : labels) {
    auto v = M::Vector::unit(label);
    for (int n = -bound; n <= bound; ++n) {
      for (int m = n + 1; m <= bound; ++m) {
        tally.record(q.virasoro_residual(n, m, v), [&] {
          return "[L(" + std::to_string(n) + "), L(" + std::to_string(m) + ")] on label " +
                 std::to_string(&label - labels.data());
        });
      }
    }
  }
  return tally.outcome();
}

/// [T(n), x] = 0 for |n| <= n_bound and x in `gens`.
template <AffineModule M>
Outcome center_commutators(const QuadraticFields<M>& q,
                           const std::vector<typename M::Label>& labels, int n_bound,
                           const std::vector<GenSymbol>& gens) {
  detail::Tally tally;
  for (const auto& label : labels) {
    auto v = M::Vector::unit(label);
    for (int n = -n_bound; n <= n_bound; ++n) {
      for (const auto& x : gens) {
        tally.record(q.center_residual(n, x, v), [&] {
          return "[T(" + std::to_string(n) + "), " + to_string(x) + "] on label " +
                 std::to_string(&label - labels.data());
        });
      }
    }
  }
  return tally.outcome();
}

/// x v = s v for a vector v and scalar s.
template <class Label>
Outcome eigen_check(const LinComb<Label>& xv, const LinComb<Label>& v, const Rational& s) {
  LinComb<Label> r = xv;
  r.add_scaled(v, -s);
  Outcome o;
  o.pass = r.is_zero();
  o.residual = {{"expected", format_rational(s)}, {"vector", vector_to_json(r)}};
  return o;
}

/// Applies the monomial m (rightmost factor first) to v.
template <AffineModule M>
typename M::Vector act_word(const M& mod, const Monomial& m, typename M::Vector v) {
  for (auto it = m.rbegin(); it != m.rend(); ++it) v = mod.act(*it, v);
  return v;
}

/// Compares a PBW-type module Q (basis: monomials applied to its cyclic
/// vector) with a module N through u . w_Q -> u . w_N. Reports the
/// well-definedness residual g Phi(u) - Phi(g u) over `gens` and the rank of
/// the image of the box.
struct RealizationComparison {
  Outcome well_defined;
  Outcome injective;
};

template <AffineModule Q, AffineModule N>
RealizationComparison compare_pbw_realization(const Q& q, const N& target,
                                                    const std::vector<Monomial>& box,
                                                    const std::vector<GenSymbol>& gens) {
  std::map<Monomial, typename N::Vector> images;
  auto phi_label = [&](const Monomial& m) -> const typename N::Vector& {
    auto it = images.find(m);
    if (it != images.end()) return it->second;
    return images.emplace(m, act_word(target, m, target.cyclic())).first->second;
  };
  auto phi = [&](const typename Q::Vector& v) {
    typename N::Vector out;
    for (const auto& [m, coeff] : v) out.add_scaled(phi_label(m), coeff);
    return out;
  };
  RealizationComparison out;
  detail::Tally tally;
  for (const auto& m : box) {
    const auto image = phi_label(m);
    for (const auto& g : gens) {
      auto r = target.act(g, image) - phi(q.act(g, Q::Vector::unit(m)));
      tally.record(r, [&] { return to_string(g) + " on " + format_monomial(m); });
    }
  }
  out.well_defined = tally.outcome();
  std::vector<typename N::Vector> columns;
  for (const auto& m : box) columns.push_back(phi_label(m));
  std::size_t r = rank_of(columns);
  out.injective.pass = r == box.size();
  out.injective.residual = {{"rank", r}, {"expected", box.size()}};
  return out;
}

/// Whittaker-vector kernel of type (lambda, mu) over the box with the
/// vanishing conditions run up to max_depth + 1.
template <AffineModule M>
std::vector<typename M::Vector> whittaker_kernel(const M& mod, const Rational& lambda,
                                                 const Rational& mu,
                                                 const std::vector<typename M::Label>& box,
                                                 int max_depth) {
  return whittaker_vector_solver(mod, standard_conditions(lambda, mu, max_depth + 1), box);
}

/// Monomials in T(0), ..., T(-max_depth) applied to w in the universal
/// critical module whose expansion stays in the box; returns the vectors.
inline std::vector<ModVector> admissible_t_monomials(const UniversalModule& v,
                                                     const TruncationBox& box) {
  QuadraticFields<UniversalModule> q(v);
  std::map<Monomial, bool> inside;
  for (const auto& l : v.box(box)) inside.emplace(l, true);
  std::vector<GenSymbol> gens;
  for (int n = box.max_depth; n >= 0; --n) gens.push_back(T(-n));
  std::vector<ModVector> out;
  for (const auto& word : enumerate_monomials(gens, box)) {
    ModVector x = v.cyclic();
    for (auto it = word.rbegin(); it != word.rend(); ++it) x = q.T(it->mode, x);
    bool fits = true;
    for (const auto& [m, coeff] : x) fits = fits && inside.count(m);
    if (fits) out.push_back(std::move(x));
  }
  return out;
}

/// Seeded random vector over `labels` with coefficients in {-3, ..., 3}.
template <class Label>
LinComb<Label> random_vector(const std::vector<Label>& labels, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  LinComb<Label> v;
  while (v.is_zero()) {
    for (const auto& l : labels) v.add_term(l, coeff(rng));
  }
  return v;
}

/// Exponent triple (i, j, k) of an e/h/f monomial: e(-n) sits in slot n,
/// h(-n) and f(-n) in slot n + 1.
inline ExponentTriple affine_triple(const Monomial& m) {
  ExponentTriple t;
  for (const auto& g : m) {
    switch (g.family) {
      case Family::E: t.i.add(-g.mode, 1); break;
      case Family::H: t.j.add(1 - g.mode, 1); break;
      case Family::F: t.k.add(1 - g.mode, 1); break;
      default: throw std::domain_error("unexpected factor " + to_string(g));
    }
  }
  return t;
}

struct BasisCertificate {
  Outcome rank;
  Outcome leading;
};

/// Sugawara-substituted basis over the universal box: each f(-n) is replaced
/// by L(-n), the vectors must be independent, the coefficient on the original
/// monomial must be (lambda/(kappa+2))^|k| and every other support element
/// must have a strictly smaller f-block.
inline BasisCertificate sugawara_basis_certificate(const UniversalModule& v,
                                                   const TruncationBox& box) {
  QuadraticFields<UniversalModule> q(v);
  const Rational ratio = v.params().lambda / (v.level() + 2);
  BasisCertificate cert;
  std::vector<ModVector> vectors;
  detail::Tally tally;
  auto labels = v.box(box);
  for (const auto& u : labels) {
    Monomial sub = u;
    for (auto& g : sub) {
      if (g.family == Family::F) g.family = Family::L;
    }
    ModVector x = sugawara_basis_vector(q, sub);
    ExponentTriple t = affine_triple(u);
    ModVector r;
    Rational expected = power(ratio, t.k.size());
    if (x.coeff(u) != expected) r.add_term(u, x.coeff(u) - expected);
    for (const auto& [m, coeff] : x) {
      if (m == u) continue;
      if (compare(MonomialOrder::LengthSlot, affine_triple(m).k, t.k) >= 0) r.add_term(m, coeff);
    }
    tally.record(r, [&] { return format_monomial(u); });
    vectors.push_back(std::move(x));
  }
  cert.leading = tally.outcome();
  std::size_t rk = rank_of(vectors);
  cert.rank.pass = rk == labels.size();
  cert.rank.residual = {{"rank", rk}, {"expected", labels.size()}};
  return cert;
}

/// [d, x(n)] v = n x(n) v with d := -L(0) of the lattice, over box labels.
inline Outcome lattice_degree_check(const LatticeModule& mod, const std::vector<PiLabel>& labels,
                                    const std::vector<GenSymbol>& gens) {
  detail::Tally tally;
  for (const auto& label : labels) {
    auto v = LatticeModule::Vector::unit(label);
    for (const auto& x : gens) {
      auto xv = mod.act(x, v);
      auto r = mod.act(x, mod.L0(v)) - mod.L0(xv);
      r.add_scaled(xv, -x.mode);
      tally.record(r, [&] { return "[d, " + to_string(x) + "] on " + format_pi(label); });
    }
  }
  return tally.outcome();
}

}  // namespace whittaker
