#include <cmath>
#include <map>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "fqh/entanglement.hpp"
#include "support.hpp"

using namespace fqh;

namespace {

// Unblocked coefficient matrix, rows = left patterns, cols = right patterns.
Eigen::MatrixXd dense_matrix(const WavefunctionExpansion& e, int cut) {
  std::map<std::vector<int>, int> rows, cols;
  std::vector<std::tuple<int, int, double>> entries;
  double norm = 0;
  for (const auto& t : e.terms) norm += t.h * t.h;
  for (const auto& t : e.terms) {
    std::vector<int> l, r;
    for (int v : t.lambda) (v < cut ? l : r).push_back(v);
    const int i = rows.emplace(l, static_cast<int>(rows.size())).first->second;
    const int j = cols.emplace(r, static_cast<int>(cols.size())).first->second;
    entries.emplace_back(i, j, t.h / std::sqrt(norm));
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (const auto& [i, j, v] : entries) m(i, j) = v;
  return m;
}

std::vector<double> significant(const Eigen::VectorXd& s) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) >= kSchmidtTail) out.push_back(s(i));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double sum_of_squares(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

TEST(Schmidt, TrivialCuts) {
  const auto e = build_expansion(Root::laughlin(2, 3), Geometry::cylinder(1.0));
  const auto s0 = schmidt_spectrum(e, 0);
  ASSERT_EQ(s0.values.size(), 1u);
  EXPECT_NEAR(s0.values[0], 1.0, 1e-15);
  const auto send = schmidt_spectrum(e, 5);
  ASSERT_EQ(send.values.size(), 1u);
  EXPECT_NEAR(send.values[0], 1.0, 1e-15);
  const auto single = build_expansion(Root::make(3, 1, Partition{4}), Geometry::cylinder(1.0));
  for (int cut = 0; cut <= 5; ++cut) {
    const auto s = schmidt_spectrum(single, cut);
    ASSERT_EQ(s.values.size(), 1u);
    EXPECT_DOUBLE_EQ(s.values[0], 1.0);
  }
  EXPECT_THROW(schmidt_spectrum(e, 6), PreconditionError);
  EXPECT_THROW(schmidt_spectrum(e, -1), PreconditionError);
  EXPECT_THROW(schmidt_spectrum(build_expansion(Root::laughlin(2, 2), Geometry::planar()), 1), PreconditionError);
}

TEST(Schmidt, TwoParticleClosedForm) {
  for (double g : {0.5, 1.0, 2.0}) {
    const auto s = schmidt_spectrum(build_expansion(Root::laughlin(2, 2), Geometry::cylinder(g)), 2);
    const double x = 2 * std::exp(-2 * g * g);
    ASSERT_EQ(s.values.size(), 2u);
    const double hi = std::max(1.0, x) / (1 + x), lo = std::min(1.0, x) / (1 + x);
    EXPECT_NEAR(s.values[0] * s.values[0], hi, 1e-14);
    EXPECT_NEAR(s.values[1] * s.values[1], lo, 1e-14);
    EXPECT_NEAR(s.entanglement_spectrum()[0], -std::log(hi), 1e-12);
  }
}

TEST(Schmidt, MatchesUnblockedSvdBothWays) {
  for (int q = 1; q <= 3; ++q)
    for (const Partition& b : {Partition{0, 0, 0, 0}, Partition{0, 1, 1, 2}}) {
      const Root root = Root::make(q, 4, b);
      const auto e = build_expansion(root, Geometry::cylinder(0.7));
      for (int cut = 0; cut <= root_partition(root).back() + 1; ++cut) {
        const auto s = schmidt_spectrum(e, cut);
        EXPECT_NEAR(sum_of_squares(s.values), 1.0, 1e-10);
        const Eigen::MatrixXd m = dense_matrix(e, cut);
        const auto direct = significant(Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues());
        const Eigen::MatrixXd mt = m.transpose();
        const auto swapped = significant(Eigen::JacobiSVD<Eigen::MatrixXd>(mt).singularValues());
        ASSERT_EQ(s.values.size(), direct.size());
        ASSERT_EQ(swapped.size(), direct.size());
        for (std::size_t i = 0; i < direct.size(); ++i) {
          ASSERT_NEAR(s.values[i], direct[i], 1e-12);
          ASSERT_NEAR(swapped[i], direct[i], 1e-12);
        }
      }
    }
}

TEST(Schmidt, ReflectionSymmetryOfLaughlinState) {
  const Root root = Root::laughlin(2, 4);
  const auto e = build_expansion(root, Geometry::cylinder(0.9));
  const int top = root_partition(root).back();
  for (int cut = 0; cut <= top + 1; ++cut) {
    const auto a = schmidt_spectrum(e, cut), b = schmidt_spectrum(e, top + 1 - cut);
    ASSERT_EQ(a.values.size(), b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) ASSERT_NEAR(a.values[i], b.values[i], 1e-12);
  }
}

TEST(Schmidt, ExactlyFactorizedStateHasTrivialSpectrum) {
  // all squeezed terms underflow to exactly zero
  const auto e = build_expansion(Root::laughlin(2, 3), Geometry::cylinder(30.0));
  for (int cut : {2, 4}) {
    const auto s = schmidt_spectrum(e, cut);
    ASSERT_EQ(s.values.size(), 1u);
    EXPECT_EQ(s.values[0], 1.0);
    EXPECT_EQ(s.entanglement_spectrum()[0], 0.0);
    EXPECT_FALSE(std::signbit(s.entanglement_spectrum()[0]));
  }
}

TEST(Gap, Examples) {
  const Root root = Root::laughlin(2, 4);
  EXPECT_EQ(block_boundary(root, 2), 4);
  const auto r = entanglement_gap_check(root, 5.0, 2);
  EXPECT_EQ(r.cut, 4);
  EXPECT_TRUE(r.ok());
  const double c = 4.434776922256569;
  EXPECT_NEAR(r.c_constant, c, 1e-14);
  EXPECT_NEAR(r.bound, 1 - 4 * std::sqrt(2.0) / std::sqrt(std::exp(2 * c) - 1), 1e-14);
  EXPECT_GE(r.largest_eigenvalue, r.bound);
  const auto thin = entanglement_gap_check(root, 20.0, 2);
  EXPECT_GE(thin.largest_eigenvalue, 1 - 1e-10);
  for (int n1 = 1; n1 < 4; ++n1) EXPECT_TRUE(entanglement_gap_check(root, 5.0, n1).ok());
}

TEST(Gap, Preconditions) {
  const Root root = Root::laughlin(2, 4);
  EXPECT_THROW(entanglement_gap_check(root, 1.0, 2), PreconditionError);
  EXPECT_THROW(entanglement_gap_check_at(root, 5.0, 3), PreconditionError);
  EXPECT_EQ(entanglement_gap_check_at(root, 5.0, 4).n1, 2);
  EXPECT_THROW(block_boundary(root, 4), PreconditionError);
}

TEST(Gap, Json) {
  const auto j = to_json(entanglement_gap_check(Root::laughlin(2, 3), 5.0, 1));
  for (const char* k : {"cut", "values", "entanglement_spectrum", "gap_bound", "largest_eigenvalue", "ok"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["cut"], 2);
}
