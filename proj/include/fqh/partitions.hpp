#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "fqh/errors.hpp"

namespace fqh {

// Weakly increasing tuple of non-negative integers.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      require(parts_[i] >= 0, "partition parts must be non-negative");
      require(i == 0 || parts_[i - 1] <= parts_[i], "partition parts must be weakly increasing");
    }
  }
  Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

  static Partition zeros(int n) { return Partition(std::vector<int>(static_cast<std::size_t>(n), 0)); }

  int length() const { return static_cast<int>(parts_.size()); }
  bool empty() const { return parts_.empty(); }
  long weight() const { return std::accumulate(parts_.begin(), parts_.end(), 0L); }
  int operator[](std::size_t i) const { return parts_[i]; }
  int front() const { return parts_.front(); }
  int back() const { return parts_.back(); }
  const std::vector<int>& parts() const { return parts_; }
  auto begin() const { return parts_.begin(); }
  auto end() const { return parts_.end(); }

  Partition slice(int from, int to) const {
    return Partition(std::vector<int>(parts_.begin() + from, parts_.begin() + to));
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(parts_[i]);
    }
    return s + ")";
  }

  friend auto operator<=>(const Partition&, const Partition&) = default;
  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<int> parts_;
};

struct PartitionHash {
  std::size_t operator()(const Partition& p) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (int v : p) h = (h ^ static_cast<std::size_t>(v)) * 0x100000001b3ULL;
    return h;
  }
};

using OccupationConfig = std::map<int, int>;

struct Root {
  int q = 1;
  int n = 1;
  Partition b;

  static Root make(int q, int n, Partition b) {
    require(q >= 1, "q must be >= 1");
    require(n >= 1, "n must be >= 1");
    require(b.length() == n, "b must have length n (got " + std::to_string(b.length()) + ", n=" +
                                 std::to_string(n) + ")");
    return Root{q, n, std::move(b)};
  }
  static Root laughlin(int q, int n) { return make(q, n, Partition::zeros(n)); }

  friend bool operator==(const Root&, const Root&) = default;
};

inline OccupationConfig occupation(const Partition& lambda) {
  OccupationConfig c;
  for (int v : lambda) ++c[v];
  return c;
}

inline mpz_class factorial(long n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

inline mpz_class binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

// M(lambda)! = prod_j m(lambda, j)!
inline mpz_class m_factorial(const Partition& lambda) {
  mpz_class r = 1;
  for (auto [part, count] : occupation(lambda)) r *= factorial(count);
  return r;
}

inline Partition root_partition(const Root& root) {
  require(root.b.length() == root.n, "b length does not match n");
  std::vector<int> parts(static_cast<std::size_t>(root.n));
  for (int j = 0; j < root.n; ++j) parts[j] = root.q * j + root.b[j];
  return Partition(std::move(parts));
}

// True iff mu is dominated by lambda (every suffix sum of mu is at most that of lambda).
inline bool dominates(const Partition& lambda, const Partition& mu) {
  require(lambda.length() == mu.length(), "dominance needs equal lengths");
  require(lambda.weight() == mu.weight(), "dominance needs equal weights");
  long sl = 0, sm = 0;
  for (int i = lambda.length() - 1; i >= 0; --i) {
    sl += lambda[i];
    sm += mu[i];
    if (sm > sl) return false;
  }
  return true;
}

// R^s_{ij} with zero-based indices i < j.
inline bool squeeze_admissible(const Partition& lambda, int i, int j, int s) {
  if (i < 0 || j >= lambda.length() || i >= j || s < 1) return false;
  if (2 * s > lambda[j] - lambda[i]) return false;
  return lambda[i] < lambda[i + 1] && lambda[j] > lambda[j - 1];
}

inline Partition squeeze(const Partition& lambda, int i, int j, int s) {
  if (!squeeze_admissible(lambda, i, j, s))
    throw AdmissibilityError("squeeze R^" + std::to_string(s) + "_{" + std::to_string(i) + "," +
                             std::to_string(j) + "} is not admissible for " + lambda.str());
  std::vector<int> parts = lambda.parts();
  parts[i] += s;
  parts[j] -= s;
  std::sort(parts.begin(), parts.end());
  return Partition(std::move(parts));
}

struct EnumerateOptions {
  bool fermionic = false;
  std::size_t max_count = 500000;
};

// All length-N partitions dominated by the root partition, sorted lexicographically.
inline std::vector<Partition> enumerate_dominated(const Root& root, const EnumerateOptions& opt = {}) {
  const Partition top = root_partition(root);
  const int n = top.length();
  const long total = top.weight();
  std::vector<long> suffix(static_cast<std::size_t>(n) + 1, 0);
  for (int k = n - 1; k >= 0; --k) suffix[k] = suffix[k + 1] + top[k];

  std::vector<Partition> out;
  std::vector<int> cur(static_cast<std::size_t>(n));
  std::function<void(int, long, long)> descend = [&](int k, long upper, long used) {
    const long rem = total - used;
    if (k == 0) {
      if (rem <= upper && rem <= suffix[0] - used) {
        cur[0] = static_cast<int>(rem);
        if (out.size() >= opt.max_count)
          throw ResourceLimitError("dominated partition count exceeds cap " + std::to_string(opt.max_count));
        out.emplace_back(cur);
      }
      return;
    }
    const long hi = std::min({upper, suffix[k] - used, rem});
    const long lo = (rem + k) / (k + 1);
    for (long v = hi; v >= lo; --v) {
      cur[k] = static_cast<int>(v);
      descend(k - 1, opt.fermionic ? v - 1 : v, used + v);
    }
  };
  if (n > 0) descend(n - 1, total, 0);
  std::sort(out.begin(), out.end());
  return out;
}

// b1 followed by b2 shifted by the last entry of b1.
inline Partition compose_b(const Partition& b1, const Partition& b2) {
  std::vector<int> parts = b1.parts();
  const int shift = b1.empty() ? 0 : b1.back();
  for (int v : b2) parts.push_back(v + shift);
  return Partition(std::move(parts));
}

inline Root compose(const Root& r1, const Root& r2) {
  require(r1.q == r2.q, "composed roots must share q");
  return Root::make(r1.q, r1.n + r2.n, compose_b(r1.b, r2.b));
}

inline Partition concatenate(const Partition& mu1, const Root& root1, const Partition& mu2) {
  require(mu1.length() == root1.n && dominates(root_partition(root1), mu1),
          "first segment must be dominated by its root partition");
  std::vector<int> parts = mu1.parts();
  const int shift = root1.q * root1.n + root1.b.back();
  for (int v : mu2) parts.push_back(v + shift);
  return Partition(std::move(parts));
}

// Root of the particles [from, to) of a larger root, re-based so its voids start from the
// preceding b entry.
inline Root segment_root(const Root& root, int from, int to) {
  require(0 <= from && from < to && to <= root.n, "invalid segment bounds");
  const int base = from == 0 ? 0 : root.b[from - 1];
  std::vector<int> b;
  for (int j = from; j < to; ++j) b.push_back(root.b[j] - base);
  return Root::make(root.q, to - from, Partition(std::move(b)));
}

inline int segment_offset(const Root& root, int from) {
  return from == 0 ? 0 : root.q * from + root.b[from - 1];
}

// s in 1..N-1 such that the first s parts have the same sum as in the root partition.
inline std::vector<int> renewal_points(const Partition& lambda, const Root& root) {
  const Partition top = root_partition(root);
  require(lambda.length() == root.n && dominates(top, lambda), "partition not dominated by root");
  std::vector<int> pts;
  long a = 0, b = 0;
  for (int s = 1; s < root.n; ++s) {
    a += lambda[s - 1];
    b += top[s - 1];
    if (a == b) pts.push_back(s);
  }
  return pts;
}

inline bool is_irreducible(const Partition& lambda, const Root& root) {
  return renewal_points(lambda, root).empty();
}

struct Segment {
  Root root;
  Partition part;
  int from = 0;  // index of the first particle in the parent
};

inline std::vector<Segment> irreducible_decomposition(const Partition& lambda, const Root& root) {
  std::vector<int> cuts = renewal_points(lambda, root);
  cuts.insert(cuts.begin(), 0);
  cuts.push_back(root.n);
  std::vector<Segment> segs;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const int from = cuts[i], to = cuts[i + 1];
    const int off = segment_offset(root, from);
    std::vector<int> parts;
    for (int j = from; j < to; ++j) parts.push_back(lambda[j] - off);
    segs.push_back({segment_root(root, from, to), Partition(std::move(parts)), from});
  }
  return segs;
}

// Number of integer partitions of n.
inline mpz_class partition_count(int n) {
  if (n < 0) return 0;
  std::vector<mpz_class> p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= n; ++part)
    for (int m = part; m <= n; ++m) p[m] += p[m - part];
  return p[n];
}

// Partitions of n into positive parts, weakly increasing, sorted lexicographically.
inline std::vector<Partition> partitions_of(int n) {
  std::vector<Partition> out;
  if (n < 0) return out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int rem, int maxpart) {
    if (rem == 0) {
      out.emplace_back(std::vector<int>(cur.rbegin(), cur.rend()));
      return;
    }
    for (int v = std::min(rem, maxpart); v >= 1; --v) {
      cur.push_back(v);
      rec(rem - v, v);
      cur.pop_back();
    }
  };
  rec(n, n);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fqh
