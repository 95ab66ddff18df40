#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"

#include "fqh/partitions.hpp"
#include "fqh/scalar.hpp"

namespace fqh {

// Polynomial in the power sums x_n = p_n. A term is keyed by the multiset of power-sum
// indices (a partition with positive parts).
struct SymPolynomial {
  std::map<Partition, mpq_class> coeffs;

  template <class Value>
  Value evaluate(const std::vector<Value>& x) const {  // x[n-1] = value of x_n
    Value total = 0;
    for (const auto& [mu, c] : coeffs) {
      Value t = c;
      for (int n : mu) t *= x[static_cast<std::size_t>(n - 1)];
      total += t;
    }
    return total;
  }

  friend bool operator==(const SymPolynomial&, const SymPolynomial&) = default;
};

inline mpq_class power_sum_eval(int n, const std::vector<mpq_class>& points) {
  mpq_class s = 0;
  for (const auto& z : points) {
    mpq_class t = 1;
    for (int i = 0; i < n; ++i) t *= z;
    s += t;
  }
  return s;
}

// (1/M(b)!) sum over S_N, which equals the sum over distinct rearrangements of b.
inline mpq_class monomial_eval(const Partition& b, const std::vector<mpq_class>& points) {
  require(static_cast<int>(points.size()) == b.length(), "monomial_eval needs one point per part");
  std::vector<int> e = b.parts();
  std::vector<std::vector<mpq_class>> powers(points.size());
  const int top = b.empty() ? 0 : b.back();
  for (std::size_t i = 0; i < points.size(); ++i) {
    powers[i].assign(static_cast<std::size_t>(top) + 1, 1);
    for (int k = 1; k <= top; ++k) powers[i][k] = powers[i][k - 1] * points[i];
  }
  mpq_class s = 0;
  do {
    mpq_class t = 1;
    for (std::size_t i = 0; i < e.size(); ++i) t *= powers[i][e[i]];
    s += t;
  } while (std::next_permutation(e.begin(), e.end()));
  return s;
}

namespace detail {

// Number of ways to distribute the parts of mu into the labelled bins lambda (bin sums exact).
inline long merge_count(const std::vector<int>& mu, std::vector<int> bins, std::size_t i = 0) {
  if (i == mu.size()) return std::all_of(bins.begin(), bins.end(), [](int v) { return v == 0; }) ? 1 : 0;
  long total = 0;
  for (std::size_t j = 0; j < bins.size(); ++j) {
    if (bins[j] < mu[i]) continue;
    bins[j] -= mu[i];
    total += merge_count(mu, bins, i + 1);
    bins[j] += mu[i];
  }
  return total;
}

inline Partition positive_parts(const Partition& b) {
  std::vector<int> p;
  for (int v : b)
    if (v > 0) p.push_back(v);
  return Partition(std::move(p));
}

}  // namespace detail

// Pol_b with m_b = Pol_b(p_1, p_2, ...) for any number of variables N >= length(b).
inline SymPolynomial transition_polynomial(const Partition& b) {
  static std::mutex mu_lock;
  static std::map<Partition, SymPolynomial> memo;
  const Partition key = detail::positive_parts(b);
  {
    std::lock_guard lock(mu_lock);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  const int n = static_cast<int>(key.weight());
  std::vector<Partition> parts = partitions_of(n);
  // Finer partitions first: p_mu expands into m_lambda only for coarsenings lambda of mu.
  std::stable_sort(parts.begin(), parts.end(),
                   [](const Partition& a, const Partition& c) { return a.length() > c.length(); });
  const std::size_t d = parts.size();
  std::vector<std::vector<mpq_class>> r(d, std::vector<mpq_class>(d, 0));  // p_mu = sum r[mu][la] m_la
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (parts[j].length() <= parts[i].length())
        r[i][j] = detail::merge_count(parts[i].parts(), parts[j].parts());

  // Solve sum_mu x_mu r[mu][la] = [la == key]; r is upper triangular in this order.
  const std::size_t target = static_cast<std::size_t>(std::find(parts.begin(), parts.end(), key) - parts.begin());
  std::vector<mpq_class> x(d, 0);
  for (std::size_t j = 0; j < d; ++j) {
    mpq_class rhs = (j == target) ? 1 : 0;
    for (std::size_t i = 0; i < j; ++i) rhs -= x[i] * r[i][j];
    x[j] = rhs / r[j][j];
  }
  SymPolynomial pol;
  for (std::size_t i = 0; i < d; ++i)
    if (sgn(x[i]) != 0) pol.coeffs[parts[i]] = x[i];
  std::lock_guard lock(mu_lock);
  memo.emplace(key, pol);
  return pol;
}

inline nlohmann::json to_json(const SymPolynomial& pol) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [mu, c] : pol.coeffs) {
    nlohmann::json ex = nlohmann::json::object();
    for (auto [j, cnt] : occupation(mu)) ex[std::to_string(j)] = cnt;
    arr.push_back({{"exponents", ex}, {"coeff", rational_str(c)}});
  }
  return arr;
}

}  // namespace fqh
