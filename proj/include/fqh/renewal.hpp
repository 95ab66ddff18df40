#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"

#include "fqh/errors.hpp"
#include "fqh/numeric.hpp"
#include "fqh/partitions.hpp"
#include "fqh/wavefunction.hpp"

namespace fqh {

// C_n = sum_{j<n} alpha_j C_{n-j} + beta_n with finitely supported weights (zero past the horizon).
template <class Real = double>
struct RenewalSystem {
  std::vector<Real> alpha;  // alpha[0] = alpha_1
  std::vector<Real> beta;
  std::optional<Real> r_beta;  // radius of convergence of beta(z); unset = infinite

  Real a(int n) const { return n >= 1 && n <= static_cast<int>(alpha.size()) ? alpha[n - 1] : Real(0); }
  Real b(int n) const { return n >= 1 && n <= static_cast<int>(beta.size()) ? beta[n - 1] : Real(0); }
  int horizon() const { return static_cast<int>(std::max(alpha.size(), beta.size())); }

  Real alpha_at(const Real& t) const { return series(alpha, t); }
  Real beta_at(const Real& t) const { return series(beta, t); }
  Real mu_at(const Real& t) const {
    Real s = 0, p = 1;
    for (std::size_t n = 0; n < alpha.size(); ++n) {
      p *= t;
      s += Real(static_cast<long>(n + 1)) * alpha[n] * p;
    }
    return s;
  }

 private:
  static Real series(const std::vector<Real>& c, const Real& t) {
    Real s = 0;
    for (std::size_t n = c.size(); n-- > 0;) s = (s + c[n]) * t;
    return s;
  }
};

template <class Real>
RenewalSystem<Real> geometric_toy() {
  return {{Real(1) / 2}, {Real(1)}, std::nullopt};
}

template <class Real>
RenewalSystem<Real> unit_toy() {
  return {{Real(1)}, {Real(1)}, std::nullopt};
}

template <class Real>
std::vector<Real> solve_C(const RenewalSystem<Real>& sys, int n_max) {
  require(n_max >= 1, "solve_C needs n_max >= 1");
  std::vector<Real> c(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    Real s = sys.b(n);
    for (int j = 1; j < n; ++j) s += sys.a(j) * c[static_cast<std::size_t>(n - j - 1)];
    c[static_cast<std::size_t>(n - 1)] = s;
  }
  return c;
}

// Largest |coefficient| of C(z)(1 - alpha(z)) - beta(z) up to order n_max.
template <class Real>
Real series_identity_residual(const RenewalSystem<Real>& sys, const std::vector<Real>& c) {
  using std::abs;
  Real worst = 0;
  for (int n = 1; n <= static_cast<int>(c.size()); ++n) {
    Real s = c[static_cast<std::size_t>(n - 1)] - sys.b(n);
    for (int j = 1; j < n; ++j) s -= sys.a(j) * c[static_cast<std::size_t>(n - j - 1)];
    Real m = s < 0 ? Real(-s) : s;
    if (m > worst) worst = m;
  }
  return worst;
}

template <class Real>
struct RadiusResult {
  Real r;
  bool capped = false;  // r is the radius of beta, reached before alpha = 1
  int iterations = 0;
};

// Smallest t with alpha(t) = 1; the root lies in (0, 1/alpha_1]. tol <= 0 bisects until the
// bracket stops shrinking (floating types only).
template <class Real>
RadiusResult<Real> radius(const RenewalSystem<Real>& sys, const Real& tol) {
  const Real a1 = sys.a(1);
  if (!(a1 > 0)) throw PreconditionError("radius needs alpha_1 > 0");
  if constexpr (std::is_same_v<Real, mpq_class>) require(tol > 0, "exact bisection needs a positive tolerance");
  RadiusResult<Real> res;
  Real lo = 0, hi = Real(1) / a1;
  if (sys.alpha_at(hi) == 1) {
    res.r = hi;
  } else {
    while (true) {
      if (tol > 0 && !(hi - lo > tol)) break;
      Real mid = (lo + hi) / 2;
      if (!(mid > lo && mid < hi)) break;
      ++res.iterations;
      const Real v = sys.alpha_at(mid);
      if (v == 1) {
        lo = hi = mid;
        break;
      }
      if (v < 1) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    res.r = hi;
  }
  if (sys.r_beta && *sys.r_beta < res.r) {
    res.r = *sys.r_beta;
    res.capped = true;
  }
  return res;
}

template <class Real>
double log_abs(const Real& x) {
  using std::abs;
  using std::log;
  if constexpr (std::is_same_v<Real, mpq_class>) {
    return std::log(std::abs(x.get_d()));
  } else {
    return to_double(Real(log(abs(x))));
  }
}

template <class Real>
struct FellerReport {
  Real r;
  Real mu;
  Real target;            // beta(r) / mu
  std::vector<Real> scaled;     // C_n r^n
  std::vector<Real> residuals;  // C_n r^n - target
  bool exact = false;           // every residual vanishes
  bool geometric = false;       // |residual| strictly decreasing
  double log_rate = 0;          // fitted ln R from |residual_n| ~ R^{-n}
  double fit_C = 0, fit_c = 0;  // alpha_n <= C exp(-c (n-1)) from the data
  double log_rate_bound = 0;    // ln of the theorem's lower bound on R
  bool theorem_applies = false; // 0 < r < 1 <= R_beta
  bool rate_ok = false;         // log_rate >= (1 - slack) log_rate_bound
};

inline constexpr double kRateSlack = 0.1;

template <class Real>
FellerReport<Real> feller_limit(const RenewalSystem<Real>& sys, const Real& r, int n_max) {
  using std::abs;
  FellerReport<Real> rep;
  rep.r = r;
  rep.mu = sys.mu_at(r);
  require(rep.mu > 0, "feller_limit needs a positive mean");
  rep.target = sys.beta_at(r) / rep.mu;
  const auto c = solve_C(sys, n_max);
  Real p = 1;
  for (int n = 1; n <= n_max; ++n) {
    p *= r;
    rep.scaled.push_back(c[static_cast<std::size_t>(n - 1)] * p);
    rep.residuals.push_back(rep.scaled.back() - rep.target);
  }
  rep.exact = std::all_of(rep.residuals.begin(), rep.residuals.end(), [](const Real& x) { return x == 0; });

  // Fit of the weight decay.
  rep.fit_C = to_double(sys.a(1));
  rep.fit_c = std::numeric_limits<double>::infinity();
  for (int n = 2; n <= static_cast<int>(sys.alpha.size()); ++n)
    if (sys.a(n) > 0) rep.fit_c = std::min(rep.fit_c, -(log_abs(sys.a(n)) - std::log(rep.fit_C)) / (n - 1));
  const double lr = log_abs(r);
  const double lrb = sys.r_beta ? log_abs(*sys.r_beta) - lr : std::numeric_limits<double>::infinity();
  double lalpha = std::numeric_limits<double>::infinity();
  if (std::isfinite(rep.fit_c)) lalpha = rep.fit_c - lr - std::log1p(rep.fit_C / -std::expm1(-rep.fit_c));
  rep.log_rate_bound = std::min(lrb, lalpha);
  rep.theorem_applies = r > 0 && r < 1 && (!sys.r_beta || *sys.r_beta >= 1);

  if (rep.exact) {
    rep.geometric = true;
    rep.log_rate = std::numeric_limits<double>::infinity();
    rep.rate_ok = true;
    return rep;
  }
  rep.geometric = true;
  for (std::size_t i = 0; i < rep.residuals.size(); ++i) {
    if (rep.residuals[i] == 0 || (i > 0 && !(abs(rep.residuals[i]) < abs(rep.residuals[i - 1])))) rep.geometric = false;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < rep.residuals.size(); ++i) {
    if (rep.residuals[i] == 0) continue;
    const double x = static_cast<double>(i + 1), y = log_abs(rep.residuals[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2) rep.log_rate = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
  rep.rate_ok = m >= 2 && (std::isinf(rep.log_rate_bound) ? false : rep.log_rate >= (1 - kRateSlack) * rep.log_rate_bound);
  return rep;
}

// alpha_n = beta_n = squared norm of the irreducible part of the n-particle Laughlin state,
// computed up to the horizon; larger segments are dropped.
template <class Real>
RenewalSystem<Real> laughlin_system(int q, double gamma, int horizon, const BuildOptions& opt = {}) {
  require(horizon >= 1, "horizon must be >= 1");
  const Geometry geo = Geometry::cylinder(gamma);
  RenewalSystem<Real> sys;
  for (int n = 1; n <= horizon; ++n) sys.alpha.push_back(irreducible_norm_squared<Real>(Root::laughlin(q, n), geo, opt));
  sys.beta = sys.alpha;
  return sys;
}

struct PressureRow {
  int n = 0;
  double log_norm = 0;     // ln C_N
  double pressure = 0;     // ln C_N / N
  double tail_sup = 0;     // sup_{M >= N} ln C_M / M over the scanned range
};

struct PressureReport {
  int q = 0;
  double gamma = 0;
  std::vector<int> suffix;
  int horizon = 0;
  std::vector<PressureRow> rows;
  std::vector<Precise> norms;  // C_1..C_{N_max}
  bool superadditive = true;   // every split N1 + N2 <= superadditive_limit
  int superadditive_limit = 0;
  double slope = 0;            // ln C_{N_max} - ln C_{N_max - 1}
};

inline Root suffix_root(int q, int n, const std::vector<int>& suffix) {
  std::vector<int> b(static_cast<std::size_t>(n), 0);
  const int k = std::min<int>(n, static_cast<int>(suffix.size()));
  for (int i = 0; i < k; ++i) b[static_cast<std::size_t>(n - k + i)] = suffix[suffix.size() - static_cast<std::size_t>(k) + static_cast<std::size_t>(i)];
  return Root::make(q, n, Partition(std::move(b)));
}

// ln C_N / N for the roots (0, ..., 0, suffix), C_N = squared norm, via the segmentation sum
// over irreducible pieces of at most `horizon` particles.
inline PressureReport pressure(int q, double gamma, int n_max, const std::vector<int>& suffix, int horizon = 8,
                               int superadditive_limit = 8, const BuildOptions& opt = {}) {
  using std::log;
  require(n_max >= 1, "pressure needs N_max >= 1");
  if (c_constant(q, gamma) <= 0) throw PreconditionError("C_q(gamma) <= 0: pressure bounds need a positive decay constant");
  PressureReport rep;
  rep.q = q;
  rep.gamma = gamma;
  rep.suffix = suffix;
  rep.horizon = horizon;
  const Geometry geo = Geometry::cylinder(gamma);
  IrreducibleNorms<Precise> irr(geo, opt);
  for (int n = 1; n <= n_max; ++n) {
    const Root root = suffix_root(q, n, suffix);
    std::vector<Precise> f(static_cast<std::size_t>(n) + 1, Precise(0));
    f[0] = 1;
    for (int e = 1; e <= n; ++e)
      for (int s = std::max(0, e - horizon); s < e; ++s) f[e] += f[s] * irr(segment_root(root, s, e));
    rep.norms.push_back(f[n]);
  }
  for (int n = 1; n <= n_max; ++n) {
    PressureRow row;
    row.n = n;
    row.log_norm = to_double(Precise(log(rep.norms[n - 1])));
    row.pressure = row.log_norm / n;
    rep.rows.push_back(row);
  }
  double sup = -std::numeric_limits<double>::infinity();
  for (int i = n_max - 1; i >= 0; --i) {
    sup = std::max(sup, rep.rows[i].pressure);
    rep.rows[i].tail_sup = sup;
  }
  rep.superadditive_limit = std::min(superadditive_limit, n_max);
  for (int a = 1; a < rep.superadditive_limit; ++a)
    for (int b = 1; a + b <= rep.superadditive_limit; ++b)
      if (rep.norms[a + b - 1] < rep.norms[a - 1] * rep.norms[b - 1]) rep.superadditive = false;
  if (n_max >= 2) rep.slope = to_double(Precise(log(rep.norms[n_max - 1]) - log(rep.norms[n_max - 2])));
  return rep;
}

template <class Real>
std::string real_str(const Real& x) {
  if constexpr (std::is_same_v<Real, mpq_class>) {
    return rational_str(x);
  } else if constexpr (std::is_same_v<Real, double>) {
    return format_double(x);
  } else {
    return x.str(40, std::ios_base::scientific);
  }
}

template <class Real>
nlohmann::json to_json(const FellerReport<Real>& rep) {
  nlohmann::json res = nlohmann::json::array(), scaled = nlohmann::json::array();
  for (const auto& x : rep.residuals) res.push_back(real_str(x));
  for (const auto& x : rep.scaled) scaled.push_back(real_str(x));
  auto num = [](double x) -> nlohmann::json { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(std::isinf(x) && x > 0 ? "inf" : "-inf"); };
  return {{"r", real_str(rep.r)},
          {"mu", real_str(rep.mu)},
          {"target", real_str(rep.target)},
          {"scaled", scaled},
          {"residuals", res},
          {"exact", rep.exact},
          {"geometric", rep.geometric},
          {"log_rate", num(rep.log_rate)},
          {"log_rate_bound", num(rep.log_rate_bound)},
          {"fit_C", num(rep.fit_C)},
          {"fit_c", num(rep.fit_c)},
          {"theorem_applies", rep.theorem_applies},
          {"rate_ok", rep.rate_ok}};
}

inline nlohmann::json to_json(const PressureReport& rep) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"n", r.n}, {"log_norm", r.log_norm}, {"pressure", r.pressure}, {"tail_sup", r.tail_sup}});
  return {{"q", rep.q},         {"gamma", rep.gamma},   {"suffix", rep.suffix},
          {"horizon", rep.horizon}, {"rows", rows},   {"superadditive", rep.superadditive},
          {"slope", rep.slope}};
}

}  // namespace fqh
