#include <cmath>

#include <gtest/gtest.h>

#include "fqh/observables.hpp"
#include "support.hpp"

using namespace fqh;
using testing_support::all_of_length;

namespace {

// Occupation-vector ladder arithmetic written out independently of the library.
struct Dense {
  std::vector<int> occ;
  double amp = 1;
  bool alive = true;
};

Dense dense_apply(const LadderWord& w, const Partition& lam, int orbitals) {
  Dense d;
  d.occ.assign(static_cast<std::size_t>(orbitals), 0);
  for (int k : lam) ++d.occ[k];
  auto below = [&](int k) {
    int c = 0;
    for (int i = 0; i < k; ++i) c += d.occ[i];
    return c;
  };
  const bool fermi = w.statistics == Statistics::fermion;
  for (int i = static_cast<int>(w.annihilate.size()) - 1; i >= 0 && d.alive; --i) {
    const int k = w.annihilate[i];
    if (d.occ[k] == 0) {
      d.alive = false;
      break;
    }
    d.amp *= fermi ? (below(k) % 2 ? -1.0 : 1.0) : std::sqrt(double(d.occ[k]));
    --d.occ[k];
  }
  for (int i = static_cast<int>(w.create.size()) - 1; i >= 0 && d.alive; --i) {
    const int k = w.create[i];
    if (fermi && d.occ[k] == 1) {
      d.alive = false;
      break;
    }
    d.amp *= fermi ? (below(k) % 2 ? -1.0 : 1.0) : std::sqrt(double(d.occ[k] + 1));
    ++d.occ[k];
  }
  return d;
}

double dense_expectation(const WavefunctionExpansion& e, const LadderWord& w, int orbitals) {
  double num = 0, den = 0;
  for (const auto& t : e.terms) den += t.h * t.h;
  for (const auto& lam : e.terms) {
    const Dense d = dense_apply(w, lam.lambda, orbitals);
    if (!d.alive) continue;
    for (const auto& mu : e.terms) {
      std::vector<int> occ(static_cast<std::size_t>(orbitals), 0);
      for (int k : mu.lambda) ++occ[k];
      if (occ == d.occ) num += mu.h * d.amp * lam.h;
    }
  }
  return num / den;
}

std::vector<Partition> bounded_states(int n, int top) {
  std::vector<Partition> out;
  for (int w = 0; w <= n * top; ++w)
    for (const auto& p : all_of_length(n, w))
      if (p.back() <= top) out.push_back(p);
  return out;
}

}  // namespace

TEST(MatrixElement, Examples) {
  EXPECT_DOUBLE_EQ(matrix_element(Partition{1, 1, 3}, Partition{1, 1, 3}, LadderWord::number(1, Statistics::boson)), 2.0);
  EXPECT_EQ(matrix_element(Partition{1, 1, 3}, Partition{1, 1, 3}, LadderWord::number(2, Statistics::boson)), 0.0);
  const LadderWord hop{{0, 2}, {1, 1}, Statistics::boson};
  EXPECT_DOUBLE_EQ(matrix_element(Partition{0, 2}, Partition{1, 1}, hop), std::sqrt(2.0));
  const LadderWord f{{2}, {1}, Statistics::fermion};
  EXPECT_EQ(matrix_element(Partition{0, 2}, Partition{0, 1}, f), 1.0);
  const LadderWord g{{1}, {0}, Statistics::fermion};
  EXPECT_EQ(matrix_element(Partition{1, 2}, Partition{0, 2}, g), 1.0);
  const LadderWord pair{{0, 2}, {}, Statistics::fermion};
  // c*_0 c*_2 acting on the vacuum: c*_2 first (no sign), then c*_0 (no sign)
  EXPECT_EQ(matrix_element(Partition{0, 2}, Partition{}, pair), 1.0);
  const LadderWord swapped{{2, 0}, {}, Statistics::fermion};
  EXPECT_EQ(matrix_element(Partition{0, 2}, Partition{}, swapped), -1.0);
  EXPECT_EQ(matrix_element(Partition{0, 0}, Partition{0}, LadderWord{{0}, {}, Statistics::fermion}), 0.0);
}

TEST(MatrixElement, SelectionRules) {
  for (Statistics st : {Statistics::boson, Statistics::fermion})
    for (int n = 1; n <= 3; ++n) {
      const auto states = bounded_states(n, 4);
      std::vector<LadderWord> words;
      for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; ++b) {
          words.push_back({{a}, {b}, st});
          for (int c = 0; c <= 4; ++c) words.push_back({{a, c}, {b, c}, st});
        }
      for (const auto& w : words)
        for (const auto& lam : states)
          for (const auto& mu : states) {
            const double v = matrix_element(mu, lam, w);
            if (v == 0.0) continue;
            ASSERT_EQ(mu.weight() - lam.weight(), w.momentum_transfer());
            ASSERT_EQ(mu.length(), lam.length());
            const Dense d = dense_apply(w, lam, 5);
            ASSERT_TRUE(d.alive);
            ASSERT_DOUBLE_EQ(v, d.amp);
          }
    }
}

TEST(Expectation, Examples) {
  const auto one = build_expansion(Root::laughlin(2, 1), Geometry::cylinder(1.0));
  EXPECT_DOUBLE_EQ(expectation(one, LadderWord::number(0, Statistics::boson)), 1.0);
  EXPECT_THROW(expectation(build_expansion(Root::laughlin(2, 2), Geometry::planar()),
                           LadderWord::number(0, Statistics::boson)),
               PreconditionError);
}

TEST(Expectation, ConservationLaws) {
  for (int q = 1; q <= 3; ++q)
    for (const Partition& b : {Partition{0, 0, 0, 0}, Partition{0, 1, 1, 3}})
      for (double g : {0.7, 1.0, 5.0}) {
        const Root root = Root::make(q, 4, b);
        const auto e = build_expansion(root, Geometry::cylinder(g));
        const int top = root_partition(root).back();
        double n = 0, m = 0;
        for (int k = 0; k <= top; ++k) {
          const double v = expectation(e, LadderWord::number(k, statistics_for(q)));
          n += v;
          m += k * v;
        }
        EXPECT_NEAR(n, 4.0, 1e-10);
        EXPECT_NEAR(m, static_cast<double>(root_partition(root).weight()), 1e-10);
      }
}

TEST(Expectation, MatchesDenseOracle) {
  for (int q = 1; q <= 3; ++q)
    for (int n = 1; n <= 3; ++n) {
      const Root root = Root::make(q, n, Partition(std::vector<int>(static_cast<std::size_t>(n), n > 1 ? 1 : 0)));
      const auto e = build_expansion(root, Geometry::cylinder(0.6));
      const int top = root_partition(root).back();
      const Statistics st = statistics_for(q);
      for (int a = 0; a <= top; ++a)
        for (int b = 0; b <= top; ++b) {
          const LadderWord hop{{a}, {b}, st};
          ASSERT_NEAR(expectation(e, hop), dense_expectation(e, hop, top + 1), 1e-13);
          for (int c = 0; c <= top; ++c)
            for (int d = 0; d <= top; ++d) {
              const LadderWord two{{a, c}, {b, d}, st};
              ASSERT_NEAR(expectation(e, two), dense_expectation(e, two, top + 1), 1e-13);
            }
        }
    }
}

TEST(Expectation, HoppingIsSymmetric) {
  const auto e = build_expansion(Root::laughlin(2, 4), Geometry::cylinder(0.8));
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; b <= 6; ++b)
      EXPECT_NEAR(expectation(e, LadderWord{{a}, {b}, Statistics::boson}),
                  expectation(e, LadderWord{{b}, {a}, Statistics::boson}), 1e-14);
}

TEST(Expectation, BosonicDensityMomentsFinite) {
  for (double g : {0.5, 1.0}) {
    const auto e = build_expansion(Root::laughlin(2, 4), Geometry::cylinder(g));
    for (int x = 0; x <= 6; ++x) {
      const LadderWord n = LadderWord::number(x, Statistics::boson);
      std::vector<const LadderWord*> words;
      double prev = 0;
      for (int s = 1; s <= 4; ++s) {
        words.push_back(&n);
        const double v = expectation(e, words);
        ASSERT_TRUE(std::isfinite(v));
        ASSERT_GE(v, prev - 1e-12);
        prev = v;
      }
      const double m1 = expectation(e, n);
      ASSERT_GE(expectation(e, std::vector<const LadderWord*>{&n, &n}), m1 * m1 - 1e-12);
    }
  }
}

TEST(Correlator, TrivialAndOverlapping) {
  const auto e = build_expansion(Root::laughlin(2, 3), Geometry::cylinder(1.0));
  const LadderWord id = LadderWord::identity(Statistics::boson);
  EXPECT_NEAR(connected_correlator(e, id, LadderWord::number(3, Statistics::boson)), 0.0, 1e-15);
  EXPECT_NEAR(connected_correlator(e, id, id), 0.0, 1e-15);
  EXPECT_THROW(connected_correlator(e, LadderWord::number(2, Statistics::boson), LadderWord::number(2, Statistics::boson)),
               PreconditionError);
  EXPECT_THROW(connected_correlator(e, LadderWord::number(3, Statistics::boson), LadderWord::number(1, Statistics::boson)),
               PreconditionError);
}

TEST(Correlator, ThinCylinderDecorrelates) {
  for (int q = 1; q <= 3; ++q) {
    const Root root = Root::laughlin(q, 4);
    const auto e = build_expansion(root, Geometry::cylinder(20.0));
    const int top = root_partition(root).back();
    const Statistics st = statistics_for(q);
    for (int x = 0; x <= top; ++x)
      for (int y = x + q; y <= top; ++y)
        ASSERT_LT(std::abs(connected_correlator(e, LadderWord::number(x, st), LadderWord::number(y, st))), 1e-12);
  }
  const auto two = build_expansion(Root::laughlin(2, 2), Geometry::cylinder(20.0));
  EXPECT_LT(std::abs(connected_correlator(two, LadderWord{{0}, {0}, Statistics::boson},
                                          LadderWord{{2}, {2}, Statistics::boson})),
            1e-12);
}

TEST(Clustering, DensityScan) {
  const auto rep = clustering_scan(Root::laughlin(2, 5), 5.0, {2, 3, 4, 5, 6});
  EXPECT_TRUE(rep.monotone);
  EXPECT_TRUE(rep.within_bound);
  EXPECT_LT(rep.slope, 0.0);
  for (const auto& r : rep.rows) EXPECT_LE(r.value, r.bound * (1 + 1e-12));
  const auto thin = clustering_scan(Root::laughlin(2, 4), 20.0, {2, 3, 4});
  for (const auto& r : thin.rows) EXPECT_LT(r.value, 1e-12);
  const auto j = to_json(rep);
  ASSERT_EQ(j["rows"].size(), 5u);
  EXPECT_EQ(j["rows"][0]["distance"], 2);
  EXPECT_TRUE(j["rows"][0].contains("value"));
  EXPECT_TRUE(j["rows"][0].contains("bound"));
}
