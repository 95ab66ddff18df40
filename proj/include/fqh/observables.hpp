#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fqh/errors.hpp"
#include "fqh/numeric.hpp"
#include "fqh/partitions.hpp"
#include "fqh/wavefunction.hpp"

namespace fqh {

enum class Statistics { boson, fermion };

inline Statistics statistics_for(int q) { return q % 2 ? Statistics::fermion : Statistics::boson; }

// c*_{L_1} ... c*_{L_r} c_{L'_1} ... c_{L'_s}
struct LadderWord {
  std::vector<int> create;
  std::vector<int> annihilate;
  Statistics statistics = Statistics::boson;

  static LadderWord number(int k, Statistics st) { return {{k}, {k}, st}; }
  static LadderWord identity(Statistics st) { return {{}, {}, st}; }

  std::set<int> support() const {
    std::set<int> s(create.begin(), create.end());
    s.insert(annihilate.begin(), annihilate.end());
    return s;
  }
  long momentum_transfer() const {
    long m = 0;
    for (int k : create) m += k;
    for (int k : annihilate) m -= k;
    return m;
  }
};

// Orbital sign convention for fermions: c_k and c*_k pick up (-1)^{#occupied orbitals < k}.
template <class Real = double>
std::optional<Real> apply_word(const LadderWord& word, OccupationConfig& occ) {
  using std::sqrt;
  Real amp = 1;
  auto below = [&](int k) {
    int c = 0;
    for (auto it = occ.begin(); it != occ.end() && it->first < k; ++it) c += it->second;
    return c;
  };
  for (auto it = word.annihilate.rbegin(); it != word.annihilate.rend(); ++it) {
    auto f = occ.find(*it);
    if (f == occ.end() || f->second == 0) return std::nullopt;
    if (word.statistics == Statistics::boson) {
      amp *= sqrt(Real(f->second));
    } else if (below(*it) % 2) {
      amp = -amp;
    }
    if (--f->second == 0) occ.erase(f);
  }
  for (auto it = word.create.rbegin(); it != word.create.rend(); ++it) {
    require(*it >= 0, "orbital indices must be non-negative");
    int& n = occ[*it];
    if (word.statistics == Statistics::fermion) {
      if (n == 1) return std::nullopt;
      if (below(*it) % 2) amp = -amp;
    } else {
      amp *= sqrt(Real(n + 1));
    }
    ++n;
  }
  return amp;
}

inline Partition partition_of(const OccupationConfig& occ) {
  std::vector<int> parts;
  for (auto [k, n] : occ)
    for (int i = 0; i < n; ++i) parts.push_back(k);
  return Partition(std::move(parts));
}

// <Phi_mu, c*_L c_L' Phi_lambda> in the orthonormal occupation basis.
inline double matrix_element(const Partition& mu, const Partition& lambda, const LadderWord& word) {
  OccupationConfig occ = occupation(lambda);
  auto amp = apply_word<double>(word, occ);
  if (!amp || partition_of(occ) != mu) return 0.0;
  return *amp;
}

namespace detail {

template <class Real>
std::vector<Real> coefficients(const WavefunctionExpansion& exp) {
  std::vector<Real> h;
  h.reserve(exp.terms.size());
  for (const auto& t : exp.terms) {
    if constexpr (std::is_same_v<Real, double>) {
      h.push_back(t.h);
    } else {
      h.push_back(coefficient<Real>(t, exp.geometry));
    }
  }
  return h;
}

// <Psi, O_1 O_2 ... O_k Psi> with the rightmost word acting first; unnormalized.
template <class Real>
Real pair_sum(const WavefunctionExpansion& exp, const std::vector<Real>& h, const std::vector<const LadderWord*>& words) {
  Real total = 0;
  for (std::size_t i = 0; i < exp.terms.size(); ++i) {
    OccupationConfig occ = occupation(exp.terms[i].lambda);
    Real amp = 1;
    bool alive = true;
    for (auto it = words.rbegin(); it != words.rend() && alive; ++it) {
      auto a = apply_word<Real>(**it, occ);
      if (!a) {
        alive = false;
      } else {
        amp *= *a;
      }
    }
    if (!alive) continue;
    int count = 0;
    for (auto [k, n] : occ) count += n;
    if (count != exp.root.n) continue;
    const auto* t = exp.find(partition_of(occ));
    if (!t) continue;
    total += h[static_cast<std::size_t>(t - exp.terms.data())] * amp * h[i];
  }
  return total;
}

}  // namespace detail

template <class Real = double>
Real expectation(const WavefunctionExpansion& exp, const LadderWord& word) {
  require(exp.geometry.is_cylinder(), "expectation values are defined on the cylinder");
  const auto h = detail::coefficients<Real>(exp);
  Real norm = 0;
  for (const auto& x : h) norm += x * x;
  return detail::pair_sum<Real>(exp, h, {&word}) / norm;
}

// <O_1 O_2 ... O_k> with O_k acting first.
template <class Real = double>
Real expectation(const WavefunctionExpansion& exp, const std::vector<const LadderWord*>& words) {
  require(exp.geometry.is_cylinder(), "expectation values are defined on the cylinder");
  const auto h = detail::coefficients<Real>(exp);
  Real norm = 0;
  for (const auto& x : h) norm += x * x;
  return detail::pair_sum<Real>(exp, h, words) / norm;
}

// <AB> - <A><B> for supp A entirely to the left of supp B.
template <class Real = double>
Real connected_correlator(const WavefunctionExpansion& exp, const LadderWord& a, const LadderWord& b) {
  require(exp.geometry.is_cylinder(), "correlators are defined on the cylinder");
  const auto sa = a.support(), sb = b.support();
  require(sa.empty() || sb.empty() || *sa.rbegin() < *sb.begin(), "connected_correlator needs max supp A < min supp B");
  const auto h = detail::coefficients<Real>(exp);
  Real norm = 0;
  for (const auto& x : h) norm += x * x;
  const Real ab = detail::pair_sum<Real>(exp, h, {&a, &b}) / norm;
  const Real ea = detail::pair_sum<Real>(exp, h, {&a}) / norm;
  const Real eb = detail::pair_sum<Real>(exp, h, {&b}) / norm;
  return ab - ea * eb;
}

struct CorrelationRow {
  int distance = 0;
  double value = 0;  // max over placements of |connected correlator|
  int left = 0;      // placement attaining the maximum
  double bound = 0;
  double log10_value = 0;
};

struct ClusteringReport {
  double c_constant = 0;
  std::vector<CorrelationRow> rows;
  double slope = 0;  // least-squares slope of ln|conn| against distance
  bool monotone = true;
  bool within_bound = true;
  bool slope_ok = true;
  bool ok() const { return monotone && within_bound && slope_ok; }
};

// Density-density scan: for each distance d the largest |<n_x n_{x+d}> - <n_x><n_{x+d}>| over
// all placements x, x+d inside the orbital range of the root. Evaluated in extended precision
// because the connected part sits far below the O(1) densities.
inline ClusteringReport clustering_scan(const Root& root, double gamma, const std::vector<int>& distances,
                                        const BuildOptions& opt = {}) {
  using std::abs;
  using std::exp;
  using std::log;
  require(!distances.empty(), "clustering_scan needs at least one distance");
  const Geometry geo = Geometry::cylinder(gamma);
  const auto exp_ = build_expansion(root, geo, opt);
  const Statistics st = statistics_for(root.q);
  const int top = root_partition(root).back();
  const auto h = detail::coefficients<Precise>(exp_);
  Precise norm = 0;
  for (const auto& x : h) norm += x * x;

  std::vector<LadderWord> dens;
  std::vector<Precise> mean;
  for (int x = 0; x <= top; ++x) {
    dens.push_back(LadderWord::number(x, st));
    mean.push_back(detail::pair_sum<Precise>(exp_, h, {&dens.back()}) / norm);
  }

  ClusteringReport rep;
  rep.c_constant = c_constant(root.q, gamma);
  std::vector<Precise> vals;
  for (int d : distances) {
    require(d >= 1, "distances must be positive");
    Precise best = 0;
    int where = 0;
    for (int x = 0; x + d <= top; ++x) {
      const Precise ab = detail::pair_sum<Precise>(exp_, h, {&dens[x], &dens[x + d]}) / norm;
      const Precise c = abs(ab - mean[x] * mean[x + d]);
      if (c > best) {
        best = c;
        where = x;
      }
    }
    vals.push_back(best);
    CorrelationRow row;
    row.distance = d;
    row.value = to_double(best);
    row.left = where;
    row.log10_value = best > 0 ? to_double(Precise(log(best) / log(Precise(10)))) : -INFINITY;
    rep.rows.push_back(row);
  }

  const int d0 = distances.front();
  const Precise c = c_constant<Precise>(root.q, Precise(gamma));
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const Precise b = vals.front() * exp(-c * (distances[i] - d0) / 6);
    rep.rows[i].bound = to_double(b);
    if (vals[i] > b * (1 + Precise(1e-12))) rep.within_bound = false;
    if (i > 0 && !(vals[i] < vals[i - 1])) rep.monotone = false;
  }

  // Least-squares slope of ln|conn| against d with its standard error.
  const std::size_t n = vals.size();
  if (n >= 2 && std::all_of(vals.begin(), vals.end(), [](const Precise& v) { return v > 0; })) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> ys;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = distances[i];
      const double y = to_double(Precise(log(vals[i])));
      ys.push_back(y);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    rep.slope = (n * sxy - sx * sy) / denom;
    const double icpt = (sy - rep.slope * sx) / n;
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) rss += std::pow(ys[i] - icpt - rep.slope * distances[i], 2);
    const double se = n > 2 ? std::sqrt(rss / (n - 2) * n / denom) : 0.0;
    rep.slope_ok = rep.slope <= -rep.c_constant / 6 + 2 * se;
  } else {
    rep.slope_ok = false;
  }
  return rep;
}

inline nlohmann::json to_json(const ClusteringReport& rep) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"distance", r.distance}, {"value", r.value}, {"log10_value", r.log10_value}, {"bound", r.bound},
                    {"left", r.left}});
  return {{"c_constant", rep.c_constant}, {"slope", rep.slope}, {"monotone", rep.monotone},
          {"within_bound", rep.within_bound}, {"slope_ok", rep.slope_ok}, {"rows", rows}};
}

}  // namespace fqh
