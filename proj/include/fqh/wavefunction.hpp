#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"

#include "fqh/cft_ops.hpp"
#include "fqh/errors.hpp"
#include "fqh/numeric.hpp"
#include "fqh/partitions.hpp"

namespace fqh {

struct Geometry {
  enum class Kind { planar, cylinder };
  Kind kind = Kind::cylinder;
  double gamma = 1.0;

  static Geometry planar() { return {Kind::planar, 0.0}; }
  static Geometry cylinder(double gamma) {
    require(gamma > 0, "cylinder geometry needs gamma > 0");
    return {Kind::cylinder, gamma};
  }
  bool is_cylinder() const { return kind == Kind::cylinder; }
};

inline long delta_b(const Partition& lambda, const Root& root) {
  const Partition top = root_partition(root);
  require(lambda.length() == root.n && dominates(top, lambda), "delta_b: partition not dominated by root");
  long d = 0;
  for (int j = 0; j < root.n; ++j) d += static_cast<long>(top[j]) * top[j] - static_cast<long>(lambda[j]) * lambda[j];
  return d;
}

// sum_j (N + 1/2 - j)(lambda_j - root_j), j one-based.
inline mpq_class gamma_b(const Partition& lambda, const Root& root) {
  const Partition top = root_partition(root);
  require(lambda.length() == root.n && dominates(top, lambda), "gamma_b: partition not dominated by root");
  long twice = 0;
  for (int j = 1; j <= root.n; ++j) twice += (2L * root.n + 1 - 2L * j) * (lambda[j - 1] - top[j - 1]);
  mpq_class g(twice, 2);
  g.canonicalize();
  return g;
}

// prod_j lambda_j! / (q(j-1) + b_j)!
inline mpq_class planar_g_squared(const Partition& lambda, const Root& root) {
  const Partition top = root_partition(root);
  mpq_class r = 1;
  for (int j = 0; j < root.n; ++j) r *= mpq_class(factorial(lambda[j]), factorial(top[j]));
  r.canonicalize();
  return r;
}

inline double g_factor(const Partition& lambda, const Root& root, const Geometry& geo) {
  if (geo.is_cylinder()) return std::exp(-geo.gamma * geo.gamma * static_cast<double>(delta_b(lambda, root)) / 2.0);
  require(dominates(root_partition(root), lambda), "g_factor: partition not dominated by root");
  return std::sqrt(planar_g_squared(lambda, root).get_d());
}

inline long d_constant(const Root& root) { return static_cast<long>(root.q) * (root.n - 1) + root.b.back() - root.b.front(); }

template <class Real = double>
Real c_constant(int q, Real gamma) {
  using std::exp;
  using std::log;
  using std::sqrt;
  const Real rate = 4 * q + 1;
  return gamma * gamma - 2 * rate + Real(2) / q * log(1 - exp(-rate)) - real_pi<Real>() * sqrt(Real(2) / 3);
}

struct ExpansionTerm {
  Partition lambda;
  mpq_class w;
  long delta = 0;
  mpq_class gamma;
  mpq_class g_squared;  // planar factorial ratio; 1 on the cylinder
  mpz_class m_factorial;
  bool irreducible = false;
  double g = 1.0;
  double h = 1.0;
  bool underflow = false;
};

struct WavefunctionExpansion {
  Root root;
  Geometry geometry;
  std::vector<ExpansionTerm> terms;
  std::unordered_map<Partition, std::size_t, PartitionHash> index;

  const ExpansionTerm* find(const Partition& lambda) const {
    auto it = index.find(lambda);
    return it == index.end() ? nullptr : &terms[it->second];
  }
  bool any_underflow() const {
    return std::any_of(terms.begin(), terms.end(), [](const ExpansionTerm& t) { return t.underflow; });
  }
};

// h = g w / sqrt(M!) in the requested precision.
template <class Real>
Real coefficient(const ExpansionTerm& t, const Geometry& geo) {
  using std::exp;
  using std::sqrt;
  const Real w = to_real<Real>(t.w);
  if (geo.is_cylinder()) {
    const Real gm = geo.gamma;
    return w * exp(-gm * gm * Real(t.delta) / 2) / sqrt(to_real<Real>(t.m_factorial));
  }
  return w * sqrt(to_real<Real>(mpq_class(t.g_squared / t.m_factorial)));
}

struct BuildOptions {
  std::size_t max_partitions = 500000;
  unsigned threads = 1;
  Route route = Route::permutation_sum;
  bool only_irreducible = false;
};

namespace detail {

inline ExpansionTerm make_term(const Partition& lambda, const Root& root, const Geometry& geo, Route route) {
  ExpansionTerm t;
  t.lambda = lambda;
  t.w = w_coefficient(lambda, root, route);
  t.delta = delta_b(lambda, root);
  t.gamma = gamma_b(lambda, root);
  t.m_factorial = m_factorial(lambda);
  t.irreducible = is_irreducible(lambda, root);
  if (geo.is_cylinder()) {
    t.g_squared = 1;
    const double log_g = -geo.gamma * geo.gamma * static_cast<double>(t.delta) / 2.0;
    t.g = std::exp(log_g);
    const double log_h = log_g + std::log(std::abs(t.w.get_d())) - 0.5 * std::log(t.m_factorial.get_d());
    if (log_h < std::log(1e-300)) {
      t.underflow = true;
      t.h = 0.0;
    } else {
      t.h = coefficient<double>(t, geo);
    }
  } else {
    t.g_squared = planar_g_squared(lambda, root);
    t.g = std::sqrt(t.g_squared.get_d());
    t.h = coefficient<double>(t, geo);
  }
  return t;
}

}  // namespace detail

inline WavefunctionExpansion build_expansion(const Root& root, const Geometry& geo, const BuildOptions& opt = {}) {
  EnumerateOptions eo;
  eo.max_count = opt.max_partitions;
  std::vector<Partition> parts = enumerate_dominated(root, eo);
  if (opt.only_irreducible)
    parts.erase(std::remove_if(parts.begin(), parts.end(), [&](const Partition& p) { return !is_irreducible(p, root); }),
                parts.end());

  std::vector<ExpansionTerm> terms(parts.size());
  const unsigned nt = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(parts.size())));
  auto work = [&](std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i) terms[i] = detail::make_term(parts[i], root, geo, opt.route);
  };
  if (nt <= 1) {
    work(0, parts.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (parts.size() + nt - 1) / nt;
    for (unsigned k = 0; k < nt; ++k) {
      const std::size_t from = std::min(parts.size(), k * chunk);
      const std::size_t to = std::min(parts.size(), from + chunk);
      pool.emplace_back(work, from, to);
    }
    for (auto& th : pool) th.join();
  }

  WavefunctionExpansion exp{root, geo, {}, {}};
  for (auto& t : terms) {
    if (sgn(t.w) == 0) continue;
    exp.index.emplace(t.lambda, exp.terms.size());
    exp.terms.push_back(std::move(t));
  }
  return exp;
}

template <class Real = double>
Real norm_squared(const WavefunctionExpansion& exp) {
  require(exp.geometry.is_cylinder(), "norms are defined for the cylinder");
  Real s = 0;
  for (const auto& t : exp.terms) {
    if constexpr (std::is_same_v<Real, double>) {
      s += t.h * t.h;
    } else {
      const Real h = coefficient<Real>(t, exp.geometry);
      s += h * h;
    }
  }
  return s;
}

// Squared norm of the irreducible part of the expansion for this root.
template <class Real = double>
Real irreducible_norm_squared(const Root& root, const Geometry& geo, const BuildOptions& opt = {}) {
  require(geo.is_cylinder(), "irreducible norms are defined for the cylinder");
  BuildOptions o = opt;
  o.only_irreducible = true;
  return norm_squared<Real>(build_expansion(root, geo, o));
}

// Memo of irreducible norms keyed by segment root.
template <class Real>
class IrreducibleNorms {
 public:
  IrreducibleNorms(Geometry geo, BuildOptions opt = {}) : geo_(geo), opt_(opt) {}

  const Real& operator()(const Root& seg) {
    auto key = std::make_pair(seg.q, seg.b.parts());
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    return memo_.emplace(key, irreducible_norm_squared<Real>(seg, geo_, opt_)).first->second;
  }
  const Geometry& geometry() const { return geo_; }

 private:
  Geometry geo_;
  BuildOptions opt_;
  std::map<std::pair<int, std::vector<int>>, Real> memo_;
};

// Sum over all segmentations of the root of the products of irreducible norms.
template <class Real>
Real segmentation_norm(const Root& root, IrreducibleNorms<Real>& irr) {
  std::vector<Real> f(static_cast<std::size_t>(root.n) + 1, Real(0));
  f[0] = 1;
  for (int e = 1; e <= root.n; ++e)
    for (int s = 0; s < e; ++s) f[e] += f[s] * irr(segment_root(root, s, e));
  return f[root.n];
}

template <class Real = double>
struct RenewalIdentityReport {
  Real direct;
  Real segmented;
  Real relative_error;
};

template <class Real = double>
RenewalIdentityReport<Real> verify_renewal_identity(const Root& root, const Geometry& geo, const BuildOptions& opt = {}) {
  using std::abs;
  require(geo.is_cylinder(), "the renewal identity is checked on the cylinder");
  const Real direct = norm_squared<Real>(build_expansion(root, geo, opt));
  IrreducibleNorms<Real> irr(geo, opt);
  const Real seg = segmentation_norm<Real>(root, irr);
  return {direct, seg, abs(direct - seg) / abs(direct)};
}

template <class Real = double>
struct FactorizationReport {
  Real distance;
  Real bound;
};

// || Psi/|Psi| - (Psi1/|Psi1|) (.) (Psi2/|Psi2|) || for the split after n1 particles.
template <class Real = double>
FactorizationReport<Real> factorization_distance(const Root& root, int n1, const Geometry& geo, const BuildOptions& opt = {}) {
  using std::exp;
  using std::sqrt;
  require(geo.is_cylinder(), "factorization distance is defined on the cylinder");
  require(1 <= n1 && n1 < root.n, "split must satisfy 1 <= N1 < N");
  const Root r1 = segment_root(root, 0, n1);
  const Root r2 = segment_root(root, n1, root.n);
  const auto full = build_expansion(root, geo, opt);
  const auto e1 = build_expansion(r1, geo, opt);
  const auto e2 = build_expansion(r2, geo, opt);
  const Real n0 = sqrt(norm_squared<Real>(full));
  const Real n1v = sqrt(norm_squared<Real>(e1));
  const Real n2v = sqrt(norm_squared<Real>(e2));

  std::map<Partition, Real> diff;
  for (const auto& t : full.terms) diff[t.lambda] += coefficient<Real>(t, geo) / n0;
  for (const auto& a : e1.terms) {
    const Real ha = coefficient<Real>(a, geo) / n1v;
    for (const auto& b : e2.terms) diff[concatenate(a.lambda, r1, b.lambda)] -= ha * coefficient<Real>(b, geo) / n2v;
  }
  Real d2 = 0;
  for (const auto& [lam, v] : diff) d2 += v * v;
  const Real c = c_constant<Real>(root.q, Real(geo.gamma));
  const Real bound = 2 * exp(-c * root.q / 2) / (1 - exp(-c * root.q));
  return {sqrt(d2), bound};
}

inline nlohmann::json root_json(const Root& root) { return {{"q", root.q}, {"n", root.n}, {"b", root.b.parts()}}; }

inline nlohmann::json geometry_json(const Geometry& g) {
  if (g.is_cylinder()) return {{"kind", "cylinder"}, {"gamma", g.gamma}};
  return {{"kind", "planar"}};
}

inline nlohmann::json to_json(const WavefunctionExpansion& exp) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : exp.terms) {
    nlohmann::json j = {{"lambda", t.lambda.parts()},
                        {"w", rational_str(t.w)},
                        {"delta", t.delta},
                        {"m_factorial", t.m_factorial.get_str()},
                        {"g", t.g},
                        {"h", t.h}};
    if (!exp.geometry.is_cylinder()) j["g_squared"] = rational_str(t.g_squared);
    if (t.underflow) j["underflow"] = true;
    terms.push_back(std::move(j));
  }
  return {{"root", root_json(exp.root)}, {"geometry", geometry_json(exp.geometry)}, {"terms", terms},
          {"underflow", exp.any_underflow()}};
}

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string to_csv(const WavefunctionExpansion& exp) {
  std::ostringstream os;
  os << "lambda,w,delta,m_factorial,g,h\n";
  for (const auto& t : exp.terms) {
    std::string lam;
    for (std::size_t i = 0; i < t.lambda.parts().size(); ++i) lam += (i ? " " : "") + std::to_string(t.lambda[i]);
    os << lam << "," << rational_str(t.w) << "," << t.delta << "," << t.m_factorial.get_str() << ","
       << format_double(t.g) << "," << format_double(t.h) << "\n";
  }
  return os.str();
}

}  // namespace fqh
