#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/container_hash/hash.hpp>
#include <gmpxx.h>

#include "json.hpp"

#include "fqh/errors.hpp"
#include "fqh/partitions.hpp"
#include "fqh/scalar.hpp"
#include "fqh/wavefunction.hpp"

namespace fqh {

using Exponents = std::vector<int>;

// Sparse polynomial in N variables with exact integer coefficients.
struct MultiPoly {
  int n = 0;
  std::unordered_map<Exponents, mpz_class, boost::hash<Exponents>> terms;

  mpz_class coefficient(const Exponents& k) const {
    auto it = terms.find(k);
    return it == terms.end() ? mpz_class(0) : it->second;
  }
  void add(const Exponents& k, const mpz_class& c) {
    if (sgn(c) == 0) return;
    auto [it, fresh] = terms.emplace(k, c);
    if (!fresh) {
      it->second += c;
      if (sgn(it->second) == 0) terms.erase(it);
    }
  }
  // Every term has the same total degree d; returns d or -1.
  long homogeneous_degree() const {
    long d = -1;
    for (const auto& [k, c] : terms) {
      const long s = std::accumulate(k.begin(), k.end(), 0L);
      if (d >= 0 && s != d) return -1;
      d = s;
    }
    return d;
  }
};

inline MultiPoly multiply(const MultiPoly& a, const MultiPoly& b) {
  require(a.n == b.n, "multiply: variable count mismatch");
  MultiPoly out;
  out.n = a.n;
  out.terms.reserve(a.terms.size() * 2);
  Exponents k(static_cast<std::size_t>(a.n));
  for (const auto& [ka, ca] : a.terms)
    for (const auto& [kb, cb] : b.terms) {
      for (int i = 0; i < a.n; ++i) k[i] = ka[i] + kb[i];
      out.add(k, ca * cb);
    }
  return out;
}

struct OracleLimits {
  int max_n = 6;
  int max_q = 3;
};

// m_b(z) * prod_{i<j} (z_i - z_j)^q expanded exactly.
inline MultiPoly expand(int q, int n, const Partition& b, const OracleLimits& lim = {}) {
  require(q >= 1 && n >= 1, "expand needs q >= 1 and N >= 1");
  require(b.length() == n, "b must have length N");
  if (n > lim.max_n || q > lim.max_q)
    throw ResourceLimitError("oracle expansion capped at N <= " + std::to_string(lim.max_n) + ", q <= " +
                             std::to_string(lim.max_q));
  MultiPoly poly;
  poly.n = n;
  poly.add(Exponents(static_cast<std::size_t>(n), 0), 1);
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      MultiPoly f;
      f.n = n;
      for (int s = 0; s <= q; ++s) {
        Exponents k(static_cast<std::size_t>(n), 0);
        k[i] = q - s;
        k[j] = s;
        f.add(k, s % 2 ? mpz_class(-binomial(q, s)) : binomial(q, s));
      }
      poly = multiply(poly, f);
    }
  MultiPoly mono;
  mono.n = n;
  Exponents perm = b.parts();
  do {
    mono.add(perm, 1);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return multiply(poly, mono);
}

inline int permutation_sign(const std::vector<int>& p) {
  int inv = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 ? -1 : 1;
}

// (-1)^{qN(N-1)/2} sum_lambda w(lambda)/M(lambda)! sum_sigma sgn(sigma)^q z^{sigma(lambda)}.
inline std::map<Exponents, mpq_class> predicted_coefficients(const WavefunctionExpansion& exp) {
  const int q = exp.root.q, n = exp.root.n;
  const int global = (static_cast<long>(q) * n * (n - 1) / 2) % 2 ? -1 : 1;
  std::map<Exponents, mpq_class> out;
  std::vector<int> sigma(static_cast<std::size_t>(n));
  for (const auto& t : exp.terms) {
    const mpq_class base = t.w / mpq_class(t.m_factorial);
    std::iota(sigma.begin(), sigma.end(), 0);
    Exponents k(static_cast<std::size_t>(n));
    do {
      for (int i = 0; i < n; ++i) k[i] = t.lambda[sigma[i]];
      const int s = (q % 2 ? permutation_sign(sigma) : 1) * global;
      out[k] += s > 0 ? base : mpq_class(-base);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
  }
  for (auto it = out.begin(); it != out.end();) it = sgn(it->second) == 0 ? out.erase(it) : std::next(it);
  return out;
}

struct OracleMismatch {
  Exponents exponents;
  mpq_class oracle;
  mpq_class imps;
};

struct OracleReport {
  Root root;
  std::size_t oracle_terms = 0;
  std::size_t predicted_terms = 0;
  std::vector<OracleMismatch> mismatches;
  bool ok() const { return mismatches.empty(); }
};

inline OracleReport compare(const MultiPoly& poly, const WavefunctionExpansion& exp) {
  require(poly.n == exp.root.n, "compare: variable count mismatch");
  OracleReport rep{exp.root, poly.terms.size(), 0, {}};
  const auto pred = predicted_coefficients(exp);
  rep.predicted_terms = pred.size();
  for (const auto& [k, c] : poly.terms) {
    auto it = pred.find(k);
    const mpq_class v = it == pred.end() ? mpq_class(0) : it->second;
    if (v != mpq_class(c)) rep.mismatches.push_back({k, mpq_class(c), v});
  }
  for (const auto& [k, v] : pred)
    if (!poly.terms.count(k)) rep.mismatches.push_back({k, mpq_class(0), v});
  std::sort(rep.mismatches.begin(), rep.mismatches.end(),
            [](const OracleMismatch& a, const OracleMismatch& b) { return a.exponents < b.exponents; });
  return rep;
}

// Symmetric (q even) or antisymmetric (q odd) under every adjacent variable swap.
inline bool has_exchange_symmetry(const MultiPoly& poly, int q) {
  for (const auto& [k, c] : poly.terms)
    for (int i = 0; i + 1 < poly.n; ++i) {
      Exponents s = k;
      std::swap(s[i], s[i + 1]);
      if (poly.coefficient(s) != (q % 2 ? mpz_class(-c) : c)) return false;
    }
  return true;
}

inline nlohmann::json to_json(const OracleReport& rep) {
  nlohmann::json mm = nlohmann::json::array();
  for (const auto& m : rep.mismatches)
    mm.push_back({{"exponents", m.exponents}, {"oracle", rational_str(m.oracle)}, {"imps", rational_str(m.imps)}});
  return {{"root", root_json(rep.root)},
          {"oracle_terms", rep.oracle_terms},
          {"predicted_terms", rep.predicted_terms},
          {"ok", rep.ok()},
          {"mismatches", mm}};
}

}  // namespace fqh
