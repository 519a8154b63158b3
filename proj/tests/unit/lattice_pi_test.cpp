#include <gtest/gtest.h>

#include "whittaker/verify.hpp"

namespace whittaker {
namespace {

using V = LatticeModule::Vector;

LatticeModule make(const Rational& lambda, std::map<int, Rational> chi) {
  return LatticeModule(lambda, LaurentData::weight2(std::move(chi)));
}

TEST(PiAct, CyclicVector) {
  auto pi = make(2, {});
  auto w = pi.cyclic();
  EXPECT_EQ(pi.a(0, w), 2 * w);
  for (int n = 1; n <= 3; ++n) {
    EXPECT_TRUE(pi.a(n, w).is_zero());
    EXPECT_TRUE(pi.ainv(n, w).is_zero());
  }
  EXPECT_EQ(pi.ainv(0, w), Rational(1, 2) * w);
  EXPECT_EQ(pi.c_mode(0, w), -1 * w);
  EXPECT_EQ(pi.d_mode(0, w), V::unit(PiLabel{1, {}, {}}));
}

TEST(PiAct, Preconditions) {
  EXPECT_THROW(make(0, {}), std::domain_error);
  EXPECT_THROW(LatticeModule(1, LaurentData::weight1({})), std::domain_error);
  EXPECT_THROW(make(1, {}).act(d(), V{}), std::domain_error);
}

// sum_k :a(k) a^{-1}(n-k): = delta_{n,0}; a and a^{-1} commute, so the
// normal order only decides which factor acts first.
TEST(PiAct, InverseFieldProduct) {
  auto pi = make(Rational(-3, 2), {{0, 1}});
  const int K = 8;
  for (const auto& l : pi.box({2, 2})) {
    auto x = V::unit(l);
    for (int n = -2; n <= 2; ++n) {
      V sum;
      for (int k = -K; k <= 0; ++k) sum += pi.a(k, pi.ainv(n - k, x));
      for (int k = 1; k <= K; ++k) sum += pi.ainv(n - k, pi.a(k, x));
      EXPECT_EQ(sum, (n == 0 ? 1 : 0) * x) << n << " " << format_pi(l);
    }
  }
}

TEST(PiAct, AandInverseCommute) {
  auto pi = make(2, {});
  for (const auto& l : pi.box({1, 2})) {
    auto x = V::unit(l);
    for (int n = -2; n <= 2; ++n) {
      for (int m = -2; m <= 2; ++m) {
        EXPECT_EQ(pi.a(n, pi.ainv(m, x)), pi.ainv(m, pi.a(n, x)));
      }
    }
  }
}

TEST(PiAct, WeylSubrelations) {
  auto pi = make(3, {});
  for (const auto& l : pi.box({2, 2})) {
    auto x = V::unit(l);
    for (int n = -2; n <= 2; ++n) {
      for (int m = -2; m <= 2; ++m) {
        auto r = pi.a(n, pi.astar(m, x)) - pi.astar(m, pi.a(n, x));
        EXPECT_EQ(r, (n + m == 0 ? 1 : 0) * x) << n << " " << m << " " << format_pi(l);
      }
    }
  }
}

TEST(PiAct, HeisenbergPairing) {
  auto pi = make(2, {});
  for (const auto& l : pi.box({2, 2})) {
    auto x = V::unit(l);
    for (int n = -2; n <= 2; ++n) {
      if (n == 0) continue;
      EXPECT_EQ(pi.c_mode(n, pi.d_mode(-n, x)) - pi.d_mode(-n, pi.c_mode(n, x)), 2 * n * x);
      EXPECT_EQ(pi.c_mode(n, pi.c_mode(-n, x)), pi.c_mode(-n, pi.c_mode(n, x)));
      EXPECT_EQ(pi.d_mode(n, pi.d_mode(-n, x)), pi.d_mode(-n, pi.d_mode(n, x)));
    }
  }
}

TEST(EmbeddedModes, WhittakerVector) {
  const Rational lambda = 2, mu = 3;
  auto pi = make(lambda, {{1, lambda * mu}, {0, 4}, {-1, 1}});
  auto w = pi.cyclic();
  EXPECT_EQ(pi.act(e(0), w), lambda * w);
  EXPECT_EQ(pi.act(f(1), w), mu * w);
  for (int n = 0; n <= 3; ++n) {
    EXPECT_TRUE(pi.act(e(n + 1), w).is_zero());
    EXPECT_TRUE(pi.act(h(n + 1), w).is_zero());
    EXPECT_TRUE(pi.act(f(n + 2), w).is_zero());
  }
}

TEST(EmbeddedModes, AffineRelations) {
  auto pi = make(2, {{1, 2}, {0, 1}, {-1, 3}});
  auto o = representation_property(pi, AlgebraId::AffineSl2, pi.box({2, 2}), affine_modes(2));
  EXPECT_TRUE(o.pass) << o.residual.dump();
}

TEST(EmbeddedModes, TModesActByChi) {
  auto pi = make(2, {{1, 2}, {0, 1}, {-1, 3}});
  QuadraticFields<LatticeModule> q(pi);
  for (const auto& l : pi.box({1, 2})) {
    auto x = V::unit(l);
    for (int n = -2; n <= 2; ++n) EXPECT_EQ(q.T(n, x), pi.chi().at(n) * x) << n;
  }
}

TEST(L0Grading, Examples) {
  auto pi = make(2, {});
  auto w = pi.cyclic();
  EXPECT_TRUE(pi.L0(w).is_zero());
  auto cw = pi.c_mode(-1, w);
  EXPECT_EQ(pi.L0(cw), cw);
  for (int k = 1; k <= 3; ++k) EXPECT_TRUE(pi.L0(V::unit(PiLabel{k, {}, {}})).is_zero());
}

TEST(L0Grading, BoxLabelsAreEigenvectorsOfDepth) {
  auto pi = make(2, {});
  for (const auto& l : pi.box({3, 3})) {
    auto x = V::unit(l);
    EXPECT_EQ(pi.L0(x), l.depth() * x) << format_pi(l);
  }
}

// The Weyl modes regenerate the box from the cyclic vector, which behaves as
// v1 of M1(lambda, 0).
TEST(WeylModes, GenerateTheBox) {
  auto pi = make(2, {});
  const TruncationBox box{2, 2};
  auto w = pi.cyclic();
  for (int m = 1; m <= 3; ++m) EXPECT_TRUE(pi.astar(m, w).is_zero());
  RowEchelon<PiLabel> span;
  span.insert(w);
  std::vector<V> layer{w};
  for (int len = 1; len <= box.max_length + 2; ++len) {
    std::vector<V> next;
    for (const auto& x : layer) {
      for (int n = -box.max_depth - 1; n <= box.max_depth + 1; ++n) {
        for (auto y : {pi.a(n, x), pi.astar(n, x)}) {
          if (!y.is_zero() && span.insert(y)) next.push_back(std::move(y));
        }
      }
    }
    layer = std::move(next);
  }
  for (const auto& l : pi.box(box)) EXPECT_TRUE(span.contains(V::unit(l))) << format_pi(l);
}

TEST(CompareRealization, SmallBox) {
  const Rational lambda = 2, mu = 1;
  CriticalQuotient q(lambda, mu, LaurentData::weight2({{0, 1}}));
  auto pi = make(lambda, {{1, lambda * mu}, {0, 1}});
  auto cmp = compare_pbw_realization(q, pi, q.box({2, 2}), affine_modes(3));
  EXPECT_TRUE(cmp.well_defined.pass) << cmp.well_defined.residual.dump();
  EXPECT_TRUE(cmp.injective.pass) << cmp.injective.residual.dump();
  QuadraticFields<LatticeModule> fields(pi);
  EXPECT_EQ(fields.T(0, pi.cyclic()), q.t_character(0) * pi.cyclic());
}

TEST(DegreeOperator, OnlyTheZeroModeKeepsTheGrading) {
  auto gens = affine_modes(2);
  auto holds = [&](std::map<int, Rational> chi) {
    auto pi = make(2, std::move(chi));
    return lattice_degree_check(pi, pi.box({2, 2}), gens).pass;
  };
  EXPECT_TRUE(holds({{0, 5}}));
  EXPECT_TRUE(holds({}));
  EXPECT_FALSE(holds({{0, 5}, {-1, 1}}));
  EXPECT_FALSE(holds({{0, 5}, {1, 1}}));
}

}  // namespace
}  // namespace whittaker
