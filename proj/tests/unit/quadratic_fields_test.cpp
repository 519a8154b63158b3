#include <gtest/gtest.h>

#include "whittaker/verify.hpp"

namespace whittaker {
namespace {

TEST(LMode, OnTheCyclicVector) {
  for (Rational kappa : {Rational(1), Rational(-1, 2), Rational(7)}) {
    UniversalModule v({2, 3, kappa, 0});
    QuadraticFields<UniversalModule> q(v);
    auto w = v.cyclic();
    EXPECT_TRUE(q.L(2, w).is_zero());
    EXPECT_EQ(q.L(1, w), Rational(6) / (kappa + 2) * w);
  }
}

TEST(LMode, CommutatorWithLoweringMode) {
  UniversalModule v({2, 3, 1, 0});
  QuadraticFields<UniversalModule> q(v);
  for (const auto& m : v.box({2, 2})) {
    auto x = ModVector::unit(m);
    auto lhs = q.L(1, v.act(e(-1), x)) - v.act(e(-1), q.L(1, x));
    EXPECT_EQ(lhs, v.act(e(0), x)) << format_monomial(m);
  }
}

TEST(LMode, RejectsCriticalLevel) {
  UniversalModule v({2, 3, -2, 0});
  QuadraticFields<UniversalModule> q(v);
  EXPECT_THROW(q.L(0, v.cyclic()), std::domain_error);
}

TEST(LMode, SugawaraCommutatorsAndVirasoro) {
  for (Rational kappa : {Rational(1), Rational(-1, 2), Rational(7)}) {
    UniversalModule v({2, 3, kappa, 0});
    QuadraticFields<UniversalModule> q(v);
    auto labels = v.box({2, 2});
    auto s = sugawara_commutators(q, labels, 2, affine_modes(2));
    EXPECT_TRUE(s.pass) << s.residual.dump();
    auto vir = virasoro_relation(q, labels, 2);
    EXPECT_TRUE(vir.pass) << vir.residual.dump();
  }
}

TEST(LMode, ZeroModeCommutesWithZeroModes) {
  UniversalModule v({1, 2, 3, 0});
  QuadraticFields<UniversalModule> q(v);
  for (const auto& m : v.box({2, 2})) {
    auto x = ModVector::unit(m);
    for (const auto& g : {e(0), h(0), f(0)}) {
      EXPECT_TRUE(q.sugawara_residual(0, g, x).is_zero());
      EXPECT_EQ(q.L(0, v.act(g, x)), v.act(g, q.L(0, x)));
    }
  }
}

TEST(Virasoro, ResidualExamples) {
  UniversalModule v({2, 3, 1, 0});
  QuadraticFields<UniversalModule> q(v);
  auto w = v.cyclic();
  EXPECT_TRUE(q.virasoro_residual(1, -1, w).is_zero());
  EXPECT_TRUE(q.virasoro_residual(2, -2, w).is_zero());
  for (const auto& m : v.box({1, 2})) {
    EXPECT_TRUE(q.virasoro_residual(0, 5, ModVector::unit(m)).is_zero());
  }
}

TEST(Virasoro, CentralTermIsPresent) {
  // [L(2), L(-2)] w = 4 L(0) w + (1/2) c_kappa w with c_kappa = 3 kappa/(kappa+2) = 1.
  UniversalModule v({2, 3, 1, 0});
  QuadraticFields<UniversalModule> q(v);
  auto w = v.cyclic();
  auto lhs = q.L(2, q.L(-2, w)) - q.L(-2, q.L(2, w));
  EXPECT_EQ(lhs, 4 * q.L(0, w) + Rational(1, 2) * w);
}

TEST(TMode, CriticalExamples) {
  for (auto [lambda, mu] : {std::pair{Rational(2), Rational(3)}, std::pair{Rational(1), Rational(0)},
                            std::pair{Rational(5), Rational(-1)}}) {
    UniversalModule v({lambda, mu, -2, 0});
    QuadraticFields<UniversalModule> q(v);
    auto w = v.cyclic();
    EXPECT_EQ(q.T(1, w), lambda * mu * w);
    EXPECT_TRUE(q.T(2, w).is_zero());
    auto o = center_commutators(q, v.box({2, 2}), 2, affine_modes(2));
    EXPECT_TRUE(o.pass) << o.residual.dump();
  }
}

TEST(TMode, RejectsNoncriticalLevel) {
  UniversalModule v({2, 3, 1, 0});
  QuadraticFields<UniversalModule> q(v);
  EXPECT_THROW(q.T(0, v.cyclic()), std::domain_error);
}

// The sum over k is finite: slices just outside the reported range vanish.
TEST(ModeSums, BoundarySlicesVanish) {
  UniversalModule v({2, 3, 1, 0});
  QuadraticFields<UniversalModule> q(v);
  for (const auto& m : v.box({3, 3})) {
    auto x = ModVector::unit(m);
    for (int n = -3; n <= 3; ++n) {
      auto [lo, hi] = q.slice_range(n, x);
      for (int k : {lo - 2, lo - 1, hi + 1, hi + 2}) {
        EXPECT_TRUE(q.slice(n, k, x).is_zero()) << n << " " << k << " " << format_monomial(m);
      }
    }
  }
}

TEST(CentralCharacter, FromChi) {
  EXPECT_TRUE(central_character_from_chi(LaurentData::weight1({})).coeffs.empty());
  auto c = central_character_from_chi(LaurentData::weight1({{0, 4}}));
  EXPECT_EQ(c.at(0), 12);
  EXPECT_EQ(c.convention, LaurentData::Convention::Weight2);
  EXPECT_THROW(central_character_from_chi(LaurentData::weight2({})), std::domain_error);
}

TEST(CentralCharacter, ExpandsSquareAndDerivative) {
  // chi = 3/z + 1 - 2z: (chi^2 - 2 chi')/2 = 15/(2z^2) + 3/z - 7/2 - 2z + 2z^2.
  auto c = central_character_from_chi(LaurentData::weight1({{0, 3}, {-1, 1}, {-2, -2}}));
  EXPECT_EQ(c.at(0), Rational(15, 2));
  EXPECT_EQ(c.at(-1), 3);
  EXPECT_EQ(c.at(-2), Rational(-7, 2));
  EXPECT_EQ(c.at(-3), -2);
  EXPECT_EQ(c.at(-4), 2);
  EXPECT_EQ(c.at(1), 0);
}

// On the Wakimoto module with b acting by chi, T(n) is a scalar on every
// vector. The free fields give half of (chi^2 - 2 chi')/2; see the README.
TEST(CentralCharacter, WakimotoTModesAreScalars) {
  LaurentData chi = LaurentData::weight1({{0, 3}, {-1, 1}});
  auto mod = FreeFieldModule::one_dim_chi(2, 3, -2, chi);
  QuadraticFields<FreeFieldModule> q(mod);
  LaurentData c = central_character_from_chi(chi);
  for (const auto& l : mod.box({2, 2})) {
    auto v = FreeFieldModule::Vector::unit(l);
    for (int n = -4; n <= 0; ++n) EXPECT_EQ(q.T(n, v), c.at(n) / 2 * v) << n;
    EXPECT_EQ(q.T(1, v), 0 * v);
  }
}

}  // namespace
}  // namespace whittaker
