// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every comparison is exact rational equality.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "whittaker/verify.hpp"

using namespace whittaker;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("failed: " + what);
    }
  }
  void require(const Outcome& o, const std::string& what) {
    if (!o.pass) {
      pass = false;
      notes.push_back("failed: " + what + " " + o.residual.dump());
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

Rational draw(std::mt19937_64& rng, bool nonzero = false) {
  std::uniform_int_distribution<int> num(-3, 3), den(1, 2);
  while (true) {
    Rational q(num(rng), den(rng));
    q.canonicalize();
    if (!nonzero || q != 0) return q;
  }
}

constexpr TruncationBox kBox44{4, 4};
constexpr TruncationBox kBox33{3, 3};

Verdict bracket_tables() {
  Verdict v;
  auto t0 = Clock::now();
  for (AlgebraId alg : {AlgebraId::AffineSl2, AlgebraId::ExtendedSl2, AlgebraId::BorelVir,
                        AlgebraId::BorelT, AlgebraId::Ttilde, AlgebraId::Borel1}) {
    auto o = bracket_integrity(alg, 4);
    v.require(o, to_string(alg));
    v.notes.push_back(to_string(alg) + ": " + o.residual.dump());
  }
  double dt = seconds_since(t0);
  v.require(dt < 10, "runtime " + fmt_seconds(dt) + " exceeds 10s");
  v.detail = "six tables, |mode| <= 4, " + fmt_seconds(dt);
  return v;
}

Verdict representation() {
  Verdict v;
  auto t0 = Clock::now();
  const auto gens = affine_modes(3);
  const auto alg = AlgebraId::AffineSl2;
  auto run = [&](const std::string& name, auto&& fn) {
    auto t = Clock::now();
    Outcome o = fn();
    v.require(o, name);
    v.notes.push_back(name + ": " + o.residual.dump() + " in " + fmt_seconds(seconds_since(t)));
  };
  for (auto p : {WhittakerParams{2, 3, 1, 0}, WhittakerParams{2, 3, Rational(-1, 2), 0},
                 WhittakerParams{2, 0, 1, 0}, WhittakerParams{0, 3, 1, 0}}) {
    UniversalModule mod(p);
    run("V(" + format_rational(p.lambda) + "," + format_rational(p.mu) + "," +
            format_rational(p.kappa) + ")",
        [&] { return representation_property(mod, alg, mod.box(kBox44), gens); });
  }
  {
    CriticalQuotient q(2, 3, LaurentData::weight2({{0, 1}}));
    run("critical quotient (2,3,c=1/z^2)",
        [&] { return representation_property(q, alg, q.box(kBox44), gens); });
  }
  {
    auto wak = FreeFieldModule::tensor_n1(2, 3, 5, 7, 1);
    run("M1(2,3) x N1(5,7), kappa=1",
        [&] { return representation_property(wak, alg, wak.box(kBox44), gens); });
  }
  {
    LatticeModule pi(2, LaurentData::weight2({{1, 2}, {0, 1}, {-1, 3}}));
    run("M_T(chi) x Pi_2", [&] { return representation_property(pi, alg, pi.box(kBox44), gens); });
  }
  double dt = seconds_since(t0);
  v.require(dt < 300, "runtime " + fmt_seconds(dt) + " exceeds 5 min");
  v.detail = "seven modules, box(4,4), pairs with |mode| <= 3, " + fmt_seconds(dt);
  return v;
}

Verdict sugawara() {
  Verdict v;
  auto t0 = Clock::now();
  const Rational lambda = 2, mu = 3;
  for (Rational kappa : {Rational(1), Rational(-1, 2), Rational(7)}) {
    UniversalModule mod({lambda, mu, kappa, 0});
    QuadraticFields<UniversalModule> q(mod);
    auto labels = mod.box(kBox44);
    std::string tag = "kappa=" + format_rational(kappa);
    auto comm = sugawara_commutators(q, labels, 2, affine_modes(2));
    v.require(comm, tag + " [L(n),x(m)]");
    auto vir = virasoro_relation(q, labels, 2);
    v.require(vir, tag + " Virasoro");
    auto w = mod.cyclic();
    auto l1 = q.L(1, w);
    Rational expected = lambda * mu / (kappa + 2);
    v.require(l1 == expected * w, tag + " L(1)w");
    v.notes.push_back(tag + ": L(1)w = " + format_vector(l1) + "; lambda*mu/(kappa+2) = " +
                      format_rational(expected) + ", lambda*mu = " + format_rational(lambda * mu));
    v.notes.push_back(tag + ": commutators " + comm.residual.dump() + ", Virasoro " +
                      vir.residual.dump());
  }
  v.detail = "box(4,4), |n|,|m| <= 2, kappa in {1,-1/2,7}, " + fmt_seconds(seconds_since(t0));
  return v;
}

Verdict critical_center() {
  Verdict v;
  auto t0 = Clock::now();
  for (auto [lambda, mu] : {std::pair<Rational, Rational>{2, 3}, {1, 0}, {5, -1}}) {
    UniversalModule mod({lambda, mu, -2, 0});
    QuadraticFields<UniversalModule> q(mod);
    std::string tag = "(" + format_rational(lambda) + "," + format_rational(mu) + ")";
    auto o = center_commutators(q, mod.box(kBox33), 2, affine_modes(2));
    v.require(o, tag + " centrality");
    auto w = mod.cyclic();
    v.require(q.T(1, w) == lambda * mu * w, tag + " T(1)w");
    v.notes.push_back(tag + ": " + o.residual.dump() + ", T(1)w = " + format_vector(q.T(1, w)));
  }
  double dt = seconds_since(t0);
  v.require(dt < 60, "runtime " + fmt_seconds(dt) + " exceeds 1 min");
  v.detail = "box(3,3), |n|,|m| <= 2, " + fmt_seconds(dt);
  return v;
}

Verdict wakimoto_vector() {
  Verdict v;
  std::mt19937_64 rng(61);
  const FreeFieldLabel a_minus1{{1}, {}, {}}, astar0{{}, {1}, {}};
  int literal_ok = 0, consistent_ok = 0;
  Rational worst = 0;
  for (int t = 0; t < 20; ++t) {
    Rational lambda = draw(rng), mu = draw(rng), chi0 = draw(rng), chi1 = draw(rng),
             kappa = draw(rng);
    auto mod = FreeFieldModule::tensor_n1(lambda, mu, chi0, chi1, kappa);
    auto w = mod.cyclic();
    using V = FreeFieldModule::Vector;
    V base;
    base.add_term(astar0, chi1 - 2 * mu * lambda);
    base.add_term({}, mu * (chi0 - kappa));
    V displayed = base, consistent = base;
    displayed.add_term(a_minus1, mu * mu);
    consistent.add_term(a_minus1, -mu * mu);
    V f1 = mod.act(f(1), w);
    bool others = mod.act(f(2), w) == mu * (chi1 - lambda * mu) * w &&
                  mod.act(e(0), w) == lambda * w &&
                  mod.act(h(1), w) == (chi1 - 2 * mu * lambda) * w;
    for (int n = 1; n <= 4; ++n) {
      others = others && mod.act(e(n), w).is_zero() && mod.act(h(n + 1), w).is_zero() &&
               mod.act(f(n + 2), w).is_zero();
    }
    bool literal = others && f1 == displayed;
    literal_ok += literal;
    consistent_ok += others && f1 == consistent;
    if (!literal) {
      Rational r = (f1 - displayed).coeff(a_minus1);
      if (abs(r) > abs(worst)) worst = r;
      v.require(false, "tuple " + std::to_string(t) + " (" + format_rational(lambda) + "," +
                           format_rational(mu) + "," + format_rational(chi0) + "," +
                           format_rational(chi1) + "," + format_rational(kappa) +
                           "): f(1)v - displayed = " + format_vector(f1 - displayed, format_free_field));
    }
  }
  v.detail = "20 seeded tuples, displayed identities hold for " + std::to_string(literal_ok) +
             "/20";
  v.notes.push_back(
      "the displayed f(1) formula carries +mu^2 a(-1)v; the free fields give -mu^2 a(-1)v, so "
      "every tuple with mu != 0 leaves the residual -2 mu^2 a(-1)v");
  v.notes.push_back("with -mu^2 a(-1)v in place of +mu^2 a(-1)v all five identities hold for " +
                    std::to_string(consistent_ok) + "/20 tuples");
  return v;
}

Verdict prop_zero_mu() {
  Verdict v;
  std::mt19937_64 rng(63);
  int ok = 0;
  for (int t = 0; t < 10; ++t) {
    Rational lambda = draw(rng), chi0 = draw(rng), kappa = draw(rng);
    while (kappa == -2) kappa = draw(rng);
    auto mod = FreeFieldModule::tensor_n1(lambda, 0, chi0, 0, kappa);
    QuadraticFields<FreeFieldModule> q(mod);
    auto w = mod.cyclic();
    Rational expected = chi0 * (chi0 + 2) / (4 * (kappa + 2));
    bool good = mod.act(f(1), w).is_zero() && q.L(0, w) == expected * w;
    ok += good;
    v.require(good, "tuple " + std::to_string(t) + ": L(0)v = " + format_vector(q.L(0, w), format_free_field) +
                        ", expected " + format_rational(expected));
  }
  v.detail = "10 seeded tuples with mu = chi_1 = 0, " + std::to_string(ok) + "/10 exact";
  return v;
}

Verdict basis_certificate() {
  Verdict v;
  auto t0 = Clock::now();
  for (auto p : {WhittakerParams{2, 3, 1, 0}, WhittakerParams{-1, Rational(1, 2), 7, 0}}) {
    UniversalModule mod(p);
    auto cert = sugawara_basis_certificate(mod, kBox33);
    std::string tag = "(" + format_rational(p.lambda) + "," + format_rational(p.mu) + "," +
                      format_rational(p.kappa) + ")";
    v.require(cert.rank, tag + " rank");
    v.require(cert.leading, tag + " leading coefficients");
    v.notes.push_back(tag + ": rank " + cert.rank.residual.dump() + ", leading " +
                      cert.leading.residual.dump());
  }
  v.detail = "box(3,3), two parameter sets, " + fmt_seconds(seconds_since(t0));
  return v;
}

Verdict simplicity() {
  Verdict v;
  auto t0 = Clock::now();
  {
    UniversalModule mod({2, 3, 1, 0});
    auto ker = whittaker_kernel(mod, 2, 3, mod.box(kBox44), kBox44.max_depth);
    v.require(ker.size() == 1 && ker[0].size() == 1 && ker[0].coeff({}) != 0, "V(2,3,1)");
    v.notes.push_back("V(2,3,1), box(4,4): kernel dimension " + std::to_string(ker.size()));
  }
  {
    CriticalQuotient q(2, 3, LaurentData::weight2({{0, 1}}));
    auto ker = whittaker_kernel(q, 2, 3, q.box(kBox44), kBox44.max_depth);
    v.require(ker.size() == 1 && ker[0].size() == 1, "critical quotient");
    v.notes.push_back("V(2,3,-2,1/z^2), box(4,4): kernel dimension " +
                      std::to_string(ker.size()));
  }
  {
    UniversalModule mod({2, 3, -2, 0});
    auto ker = whittaker_kernel(mod, 2, 3, mod.box(kBox33), kBox33.max_depth);
    auto tmon = admissible_t_monomials(mod, kBox33);
    std::vector<ModVector> both = ker;
    both.insert(both.end(), tmon.begin(), tmon.end());
    std::size_t span = rank_of(both);
    v.require(ker.size() == tmon.size() && span == ker.size(), "universal critical");
    v.notes.push_back("V(2,3,-2), box(3,3): kernel dimension " + std::to_string(ker.size()) +
                      ", T-monomials " + std::to_string(tmon.size()) + ", joint span " +
                      std::to_string(span));
  }
  v.detail = fmt_seconds(seconds_since(t0));
  return v;
}

Verdict lattice_realization() {
  Verdict v;
  auto t0 = Clock::now();
  const Rational lambda = 2, mu = 1;
  LaurentData c = LaurentData::weight2({{0, 1}});
  CriticalQuotient q(lambda, mu, c);
  LaurentData chi = c;
  chi.set(1, lambda * mu);
  LatticeModule pi(lambda, chi);
  auto cmp = compare_pbw_realization(q, pi, q.box(kBox33), affine_modes(3));
  v.require(cmp.well_defined, "well-definedness");
  v.require(cmp.injective, "injectivity");
  QuadraticFields<LatticeModule> fields(pi);
  auto w = pi.cyclic();
  for (int n = -3; n <= 3; ++n) {
    v.require(fields.T(n, w) == q.t_character(n) * w, "T(" + std::to_string(n) + ") character");
  }
  double dt = seconds_since(t0);
  v.require(dt < 300, "runtime " + fmt_seconds(dt) + " exceeds 5 min");
  v.notes.push_back("generator actions " + cmp.well_defined.residual.dump() + ", rank " +
                    cmp.injective.residual.dump());
  v.detail = "box(3,3), |mode| <= 3, " + fmt_seconds(dt);
  return v;
}

Verdict wakimoto_quotient() {
  Verdict v;
  auto t0 = Clock::now();
  const Rational lambda = 2;
  LaurentData chi = LaurentData::weight1({{0, 3}, {-1, 1}, {-2, -2}});
  auto wak = FreeFieldModule::one_dim_chi(lambda, 0, -2, chi);
  LaurentData c = central_character_from_chi(chi);
  CriticalQuotient q(lambda, 0, c);
  auto cmp = compare_pbw_realization(q, wak, q.box(kBox44), affine_modes(3));
  v.require(cmp.well_defined, "action matrices");
  v.require(cmp.injective, "injectivity");
  v.notes.push_back("c = " + laurent_to_json(c).dump() + "; actions " +
                    cmp.well_defined.residual.dump() + ", rank " + cmp.injective.residual.dump());

  // Diagnostic: read the central character off the free fields instead.
  QuadraticFields<FreeFieldModule> fields(wak);
  LaurentData measured = LaurentData::weight2({});
  bool scalar = true;
  for (int n = -8; n <= 2; ++n) {
    auto tv = fields.T(n, wak.cyclic());
    Rational s = tv.coeff({});
    scalar = scalar && tv == s * wak.cyclic();
    measured.set(n, s);
  }
  bool half = scalar;
  for (int n = -8; n <= 2; ++n) half = half && measured.at(n) * 2 == c.at(n);
  CriticalQuotient qm(lambda, 0, measured);
  auto cm = compare_pbw_realization(qm, wak, qm.box(kBox44), affine_modes(3));
  v.notes.push_back(std::string("the free fields give T(n)v = c_n/2 v: ") +
                    (half ? "yes" : "no") + "; with that character the actions " +
                    (cm.well_defined.pass && cm.injective.pass ? "coincide " : "still differ ") +
                    cm.well_defined.residual.dump());
  v.detail = "chi = 3/z + 1 - 2z, box(4,4), |mode| <= 3, " + fmt_seconds(seconds_since(t0));
  return v;
}

Verdict degree_operator() {
  Verdict v;
  auto t0 = Clock::now();
  const auto gens = affine_modes(3);
  auto run = [&](const LaurentData& chi) {
    LatticeModule pi(2, chi);
    return lattice_degree_check(pi, pi.box(kBox33), gens);
  };
  auto base = run(LaurentData::weight2({{0, 5}}));
  v.require(base, "chi = 5/z^2");
  auto zero = run(LaurentData::weight2({}));
  v.require(zero, "chi = 0");
  v.notes.push_back("chi = 5/z^2: " + base.residual.dump());
  for (int extra : {1, -1, -2}) {
    auto o = run(LaurentData::weight2({{0, 5}, {extra, 1}}));
    std::string tag = "chi(" + std::to_string(extra) + ") = 1 added";
    v.require(!o.pass, tag + " should break the grading");
    v.notes.push_back(tag + ": " + std::to_string(o.residual.value("failed", 0)) + " of " +
                      std::to_string(o.residual.value("checked", 0)) + " commutators nonzero");
  }
  v.detail = "box(3,3), |mode| <= 3, " + fmt_seconds(seconds_since(t0));
  return v;
}

Verdict automorphisms() {
  Verdict v;
  auto sig = automorphism_check(AlgebraId::ExtendedSl2, 4, sigma);
  v.require(sig, "sigma");
  for (int s = -3; s <= 3; ++s) {
    auto o = automorphism_check(AlgebraId::AffineSl2, 4,
                                [s](const GenSymbol& g) { return spectral_flow(s, g); });
    v.require(o, "pi_" + std::to_string(s));
  }
  const Rational lambda = 1, mu = 2;
  const int p = 2, top = 4;
  LaurentData chi = LaurentData::weight1({{2, 3}, {1, 1}, {0, 2}, {-1, 1}});
  auto base = FreeFieldModule::one_dim_chi(lambda, mu, -2, chi);
  auto conds = generalized_conditions(lambda, mu, chi, p, top);
  for (int s = -3; s <= 3; ++s) {
    SpectralFlowTwist<FreeFieldModule> twisted(base, s);
    auto list = twist_conditions(conds, s);
    std::vector<WhittakerCondition> expected;
    auto unit = [](GenSymbol g) { return LieElement::unit(g); };
    expected.push_back({unit(e(s)), lambda});
    expected.push_back({unit(h(1)), chi.at(1) - 2 * lambda * mu});
    for (int k = 2; k <= p; ++k) expected.push_back({unit(h(k)), chi.at(k)});
    expected.push_back({unit(f(p + 1 - s)), mu * chi.at(p)});
    for (int n = 1; n <= top; ++n) {
      expected.push_back({unit(e(n + s)), 0});
      expected.push_back({unit(h(n + p)), 0});
      expected.push_back({unit(f(n + p + 1 - s)), 0});
    }
    bool same = list.size() == expected.size();
    for (std::size_t i = 0; same && i < list.size(); ++i) {
      same = list[i].x == expected[i].x && list[i].value == expected[i].value;
    }
    v.require(same, "twisted list for s=" + std::to_string(s));
    for (const auto& r : condition_residuals(twisted, list, twisted.cyclic())) {
      v.require(r.is_zero(), "twisted residual for s=" + std::to_string(s));
    }
  }
  v.detail = "sigma and pi_s on |mode| <= 4, twisted conditions for s in -3..3";
  return v;
}

}  // namespace

int main() {
  std::vector<std::pair<int, std::function<Verdict()>>> criteria{
      {1, bracket_tables},        {2, representation},   {3, sugawara},
      {4, critical_center},       {5, wakimoto_vector},  {6, prop_zero_mu},
      {7, basis_certificate},     {8, simplicity},       {9, lattice_realization},
      {10, wakimoto_quotient},    {11, degree_operator}, {12, automorphisms},
  };
  int failed = 0;
  for (auto& [id, fn] : criteria) {
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& ex) {
      v.pass = false;
      v.detail = std::string("exception: ") + ex.what();
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << v.detail << "\n";
    for (const auto& note : v.notes) std::cout << "    " << note << "\n";
    std::cout.flush();
  }
  std::cout << (failed ? "FAIL" : "PASS") << " acceptance: " << 12 - failed << "/12 criteria\n";
  return failed ? 1 : 0;
}
