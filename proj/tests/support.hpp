#pragma once

#include <functional>
#include <map>
#include <ostream>
#include <vector>

#include <gmpxx.h>

#include "fqh/fock.hpp"
#include "fqh/partitions.hpp"

namespace fqh {
inline void PrintTo(const Partition& p, std::ostream* os) { *os << p.str(); }
inline void PrintTo(const FockVector& v, std::ostream* os) { *os << to_json(v).dump(); }
}  // namespace fqh

namespace testing_support {

using fqh::Partition;

// All weakly increasing length-n tuples of non-negative integers with the given weight.
inline std::vector<Partition> all_of_length(int n, int weight) {
  std::vector<Partition> out;
  if (n == 0) {
    if (weight == 0) out.emplace_back(std::vector<int>{});
    return out;
  }
  std::vector<int> cur(static_cast<std::size_t>(n));
  std::function<void(int, int, int)> rec = [&](int k, int lo, int left) {
    if (k == n - 1) {
      if (left >= lo) {
        cur[k] = left;
        out.emplace_back(cur);
      }
      return;
    }
    for (int v = lo; v * (n - k) <= left; ++v) {
      cur[k] = v;
      rec(k + 1, v, left - v);
    }
  };
  rec(0, 0, weight);
  return out;
}

// Dense naive expansion of m_b(z) * prod_{i<j} (z_i - z_j)^q, exponent vectors -> integer coefficients.
using Poly = std::map<std::vector<int>, mpz_class>;

inline Poly naive_laughlin_times_monomial(int q, int n, const Partition& b) {
  Poly p;
  std::vector<int> e = b.parts();
  do {
    p[e] += 1;
  } while (std::next_permutation(e.begin(), e.end()));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int rep = 0; rep < q; ++rep) {
        Poly next;
        for (const auto& [ex, c] : p) {
          auto a = ex;
          ++a[i];
          next[a] += c;
          auto d = ex;
          ++d[j];
          next[d] -= c;
        }
        p.clear();
        for (auto& [ex, c] : next)
          if (c != 0) p.emplace(ex, c);
      }
  return p;
}

}  // namespace testing_support
