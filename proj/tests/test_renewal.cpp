#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fqh/renewal.hpp"

using namespace fqh;

TEST(Solve, GeometricToyClosedForm) {
  const auto c = solve_C(geometric_toy<mpq_class>(), 20);
  for (int n = 1; n <= 20; ++n) {
    mpq_class want(1);
    for (int k = 1; k < n; ++k) want /= 2;
    ASSERT_EQ(c[n - 1], want);
  }
}

TEST(Solve, UnitToyIsConstant) {
  for (const auto& x : solve_C(unit_toy<mpq_class>(), 15)) ASSERT_EQ(x, 1);
  EXPECT_THROW(solve_C(unit_toy<mpq_class>(), 0), PreconditionError);
}

TEST(Solve, SeriesIdentityExactForRationalWeights) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> num(0, 9), den(1, 12);
  for (int trial = 0; trial < 20; ++trial) {
    RenewalSystem<mpq_class> sys;
    for (int n = 0; n < 6; ++n) {
      mpq_class a(num(rng), den(rng)), b(num(rng), den(rng));
      a.canonicalize();
      b.canonicalize();
      sys.alpha.push_back(a);
      sys.beta.push_back(b);
    }
    const auto c = solve_C(sys, 16);
    ASSERT_EQ(series_identity_residual(sys, c), 0);
    // independent truncated product C(z)(1 - alpha(z)) against beta(z)
    for (int n = 1; n <= 16; ++n) {
      mpq_class coeff = c[n - 1];
      for (int j = 1; j < n; ++j) coeff -= sys.a(j) * c[n - j - 1];
      ASSERT_EQ(coeff, sys.b(n));
    }
  }
}

TEST(Radius, ToyExamples) {
  const auto g = radius(geometric_toy<mpq_class>(), mpq_class(1, 1000000));
  EXPECT_EQ(g.r, 2);
  EXPECT_FALSE(g.capped);
  EXPECT_EQ(radius(unit_toy<mpq_class>(), mpq_class(1, 1000000)).r, 1);
  EXPECT_THROW(radius(geometric_toy<mpq_class>(), mpq_class(0)), PreconditionError);
  RenewalSystem<mpq_class> none{{mpq_class(0)}, {mpq_class(1)}, std::nullopt};
  EXPECT_THROW(radius(none, mpq_class(1, 10)), PreconditionError);
}

TEST(Radius, CappedByBetaRadius) {
  auto sys = geometric_toy<mpq_class>();
  sys.r_beta = mpq_class(3, 2);
  const auto r = radius(sys, mpq_class(1, 1000000));
  EXPECT_TRUE(r.capped);
  EXPECT_EQ(r.r, mpq_class(3, 2));
}

TEST(Radius, BisectionBracketsTheRoot) {
  RenewalSystem<double> sys{{0.3, 0.2, 0.1, 0.05}, {1.0}, std::nullopt};
  const auto r = radius(sys, 1e-12);
  EXPECT_LE(r.r, 1 / sys.a(1));
  EXPECT_GE(sys.alpha_at(r.r), 1.0);
  EXPECT_LT(sys.alpha_at(r.r - 2e-12), 1.0);
  const auto full = radius(sys, 0.0);
  EXPECT_NEAR(full.r, r.r, 2e-12);
  EXPECT_NEAR(sys.alpha_at(full.r), 1.0, 1e-14);
}

TEST(Feller, ToyExamplesAreExact) {
  const auto g = geometric_toy<mpq_class>();
  const auto f = feller_limit(g, mpq_class(2), 12);
  EXPECT_EQ(f.mu, 1);
  EXPECT_EQ(f.target, 2);
  EXPECT_TRUE(f.exact);
  for (const auto& s : f.scaled) EXPECT_EQ(s, 2);
  const auto u = feller_limit(unit_toy<mpq_class>(), mpq_class(1), 8);
  EXPECT_EQ(u.target, 1);
  EXPECT_TRUE(u.exact);
  const auto j = to_json(f);
  EXPECT_EQ(j["r"], "2/1");
  EXPECT_EQ(j["target"], "2/1");
  EXPECT_EQ(j["log_rate"], "inf");
}

class LaughlinFeed : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { sys_ = new RenewalSystem<Precise>(laughlin_system<Precise>(2, 5.0, 8)); }
  static void TearDownTestSuite() { delete sys_; }
  static RenewalSystem<Precise>* sys_;
};
RenewalSystem<Precise>* LaughlinFeed::sys_ = nullptr;

TEST_F(LaughlinFeed, ReproducesDirectNorms) {
  const auto c = solve_C(*sys_, 8);
  for (int n = 1; n <= 8; ++n) {
    const Precise direct = norm_squared<Precise>(build_expansion(Root::laughlin(2, n), Geometry::cylinder(5.0)));
    ASSERT_LE(to_double(Precise(abs(c[n - 1] - direct) / direct)), 1e-60) << "n=" << n;
  }
  EXPECT_EQ(sys_->a(1), 1);
}

TEST_F(LaughlinFeed, RadiusBelowOne) {
  const auto r = radius(*sys_, Precise(0));
  EXPECT_GT(r.r, 0);
  EXPECT_LT(r.r, 1);
  EXPECT_LE(r.r, 1 / sys_->a(1));
  EXPECT_GT(1 / r.r, 1);
  // C_{N+2} >= (1 + alpha_2) C_N bounds the growth over two steps
  EXPECT_GE(1 / (r.r * r.r), 1 + sys_->a(2));
  EXPECT_LT(1 / r.r, 1 + sys_->a(2));
  EXPECT_LT(to_double(Precise(abs(sys_->alpha_at(r.r) - 1))), 1e-100);
}

TEST_F(LaughlinFeed, ResidualsDecayGeometrically) {
  const auto r = radius(*sys_, Precise(0));
  const auto f = feller_limit(*sys_, r.r, 12);
  EXPECT_TRUE(f.theorem_applies);
  EXPECT_TRUE(f.geometric);
  EXPECT_FALSE(f.exact);
  EXPECT_TRUE(f.rate_ok) << f.log_rate << " vs " << f.log_rate_bound;
  EXPECT_GE(f.log_rate, (1 - kRateSlack) * f.log_rate_bound);
}

TEST(Pressure, BasicShape) {
  const auto rep = pressure(2, 5.0, 8, {0});
  ASSERT_EQ(rep.rows.size(), 8u);
  EXPECT_EQ(rep.rows[0].log_norm, 0.0);
  EXPECT_TRUE(rep.superadditive);
  for (int n = 1; n <= 8; ++n) {
    const Precise direct = norm_squared<Precise>(build_expansion(suffix_root(2, n, {0}), Geometry::cylinder(5.0)));
    ASSERT_LE(to_double(Precise(abs(rep.norms[n - 1] - direct) / direct)), 1e-60);
  }
  for (const auto& r : rep.rows) EXPECT_GE(r.tail_sup, r.pressure);
  EXPECT_THROW(pressure(2, 1.0, 4, {0}), PreconditionError);
  EXPECT_EQ(suffix_root(2, 3, {0, 1}).b, Partition({0, 0, 1}));
  EXPECT_EQ(suffix_root(2, 1, {0, 1}).b, Partition({1}));
}

TEST(Pressure, SlopeIndependentOfSuffix) {
  const auto a = pressure(2, 5.0, 10, {0});
  const auto b = pressure(2, 5.0, 10, {0, 1});
  EXPECT_TRUE(a.superadditive);
  EXPECT_TRUE(b.superadditive);
  EXPECT_NEAR(a.slope, b.slope, 1e-6);
  const auto j = to_json(a);
  EXPECT_EQ(j["rows"].size(), 10u);
  EXPECT_EQ(j["suffix"], (nlohmann::json{0}));
}
