#include <random>

#include <gtest/gtest.h>

#include "fqh/symfun.hpp"
#include "support.hpp"

using namespace fqh;
using testing_support::all_of_length;

namespace {

std::vector<mpq_class> power_sums(const std::vector<mpq_class>& pts, int upto) {
  std::vector<mpq_class> x;
  for (int n = 1; n <= upto; ++n) x.push_back(power_sum_eval(n, pts));
  return x;
}

Partition with_leading_zeros(const Partition& b, int zeros) {
  std::vector<int> v(static_cast<std::size_t>(zeros), 0);
  v.insert(v.end(), b.begin(), b.end());
  return Partition(std::move(v));
}

}  // namespace

TEST(Evaluation, Examples) {
  EXPECT_EQ(power_sum_eval(1, {1, 2, 3}), 6);
  EXPECT_EQ(power_sum_eval(2, {1, 2, 3}), 14);
  EXPECT_EQ(monomial_eval(Partition{1, 1}, {2, 3}), 6);
  EXPECT_EQ(monomial_eval(Partition{0, 1}, {mpq_class(1, 3), 5}), mpq_class(16, 3));
  EXPECT_EQ(monomial_eval(Partition{0, 0, 2}, {1, 2, 3}), 14);
  EXPECT_THROW(monomial_eval(Partition{0, 1}, {1, 2, 3}), PreconditionError);
}

TEST(Transition, Examples) {
  SymPolynomial p1;
  p1.coeffs[Partition{1}] = 1;
  EXPECT_EQ(transition_polynomial(Partition{0, 0, 1}), p1);
  SymPolynomial p2;
  p2.coeffs[Partition{2}] = 1;
  EXPECT_EQ(transition_polynomial(Partition{0, 2}), p2);
  SymPolynomial p11;
  p11.coeffs[Partition{1, 1}] = mpq_class(1, 2);
  p11.coeffs[Partition{2}] = mpq_class(-1, 2);
  EXPECT_EQ(transition_polynomial(Partition{1, 1}), p11);
  SymPolynomial one;
  one.coeffs[Partition{}] = 1;
  EXPECT_EQ(transition_polynomial(Partition{0, 0}), one);
}

TEST(Transition, MatchesMonomialAtRandomPoints) {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  for (int w = 0; w <= 5; ++w)
    for (int len = 1; len <= w; ++len)
      for (const auto& base : all_of_length(len, w)) {
        if (base.front() == 0) continue;
        const SymPolynomial pol = transition_polynomial(base);
        for (int n = len; n <= len + 2; ++n) {
          const Partition b = with_leading_zeros(base, n - len);
          for (int sample = 0; sample < 20; ++sample) {
            std::vector<mpq_class> pts;
            for (int i = 0; i < n; ++i) {
              mpq_class z(num(rng), den(rng));
              z.canonicalize();
              pts.push_back(z);
            }
            ASSERT_EQ(monomial_eval(b, pts), pol.evaluate(power_sums(pts, w))) << b.str();
          }
        }
      }
}

TEST(Transition, LeadingZerosDoNotMatter) {
  for (int w = 1; w <= 6; ++w)
    for (int len = 1; len <= w; ++len)
      for (const auto& b : all_of_length(len, w)) {
        if (b.front() == 0) continue;
        for (int z = 1; z <= 3; ++z) ASSERT_EQ(transition_polynomial(with_leading_zeros(b, z)), transition_polynomial(b));
      }
}

TEST(Transition, HomogeneousOfWeightedDegree) {
  for (int w = 0; w <= 7; ++w)
    for (const auto& b : partitions_of(w))
      for (const auto& [mu, c] : transition_polynomial(b).coeffs) {
        ASSERT_EQ(mu.weight(), w);
        ASSERT_NE(c, 0);
      }
}

TEST(Transition, Json) {
  const auto j = to_json(transition_polynomial(Partition{1, 1}));
  ASSERT_EQ(j.size(), 2u);
  bool saw = false;
  for (const auto& t : j)
    if (t["exponents"] == nlohmann::json{{"1", 2}}) {
      saw = true;
      EXPECT_EQ(t["coeff"], "1/2");
    }
  EXPECT_TRUE(saw);
}
