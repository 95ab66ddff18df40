#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "fqh/cft_ops.hpp"
#include "fqh/errors.hpp"
#include "fqh/numeric.hpp"
#include "fqh/observables.hpp"
#include "fqh/oracle.hpp"
#include "fqh/partitions.hpp"
#include "fqh/symfun.hpp"
#include "fqh/wavefunction.hpp"

// Verification suites shared by the CLI and the acceptance runner. Each returns a JSON report
// with a boolean "passed".
namespace fqh::suites {

// b in {all-zero, (0,..,0,1), (0,..,1,1), (0,..,0,2)} for length n.
inline std::vector<Partition> grid_voids(int n) {
  std::vector<Partition> out;
  std::vector<int> z(static_cast<std::size_t>(n), 0);
  out.emplace_back(z);
  auto a = z;
  a[n - 1] = 1;
  out.emplace_back(a);
  if (n >= 2) {
    auto c = z;
    c[n - 1] = c[n - 2] = 1;
    out.emplace_back(c);
  }
  auto d = z;
  d[n - 1] = 2;
  out.emplace_back(d);
  return out;
}

inline std::vector<Root> grid_roots(const std::vector<int>& qs, const std::vector<int>& ns) {
  std::vector<Root> out;
  for (int q : qs)
    for (int n : ns)
      for (const auto& b : grid_voids(n)) out.push_back(Root::make(q, n, b));
  return out;
}

// Every weakly increasing non-negative b of length n with |b| <= max_weight.
inline std::vector<Partition> voids_up_to(int n, int max_weight) {
  std::vector<Partition> out;
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  std::function<void(int, int, int)> rec = [&](int k, int upper, int left) {
    if (k < 0) {
      out.emplace_back(cur);
      return;
    }
    for (int v = 0; v <= std::min(upper, left); ++v) {
      cur[k] = v;
      rec(k - 1, v, left - v);
    }
  };
  rec(n - 1, max_weight, max_weight);
  return out;
}

inline nlohmann::json oracle(const std::vector<Root>& roots, unsigned threads = 1) {
  nlohmann::json cells = nlohmann::json::array();
  bool passed = true;
  for (const auto& root : roots) {
    const MultiPoly poly = expand(root.q, root.n, root.b);
    const bool sym = has_exchange_symmetry(poly, root.q);
    const long degree = static_cast<long>(root.q) * root.n * (root.n - 1) / 2 + root.b.weight();
    const bool homog = poly.homogeneous_degree() == degree;
    for (Route route : {Route::permutation_sum, Route::boundary_charge}) {
      BuildOptions opt;
      opt.route = route;
      opt.threads = threads;
      const auto rep = compare(poly, build_expansion(root, Geometry::planar(), opt));
      nlohmann::json j = to_json(rep);
      j["route"] = route == Route::permutation_sum ? "permutation_sum" : "boundary_charge";
      j["exchange_symmetry"] = sym;
      j["homogeneous"] = homog;
      const bool ok = rep.ok() && sym && homog;
      j["ok"] = ok;
      passed = passed && ok;
      cells.push_back(std::move(j));
    }
  }
  return {{"suite", "oracle"}, {"passed", passed}, {"cells", cells}};
}

inline nlohmann::json algebra(const std::vector<int>& qs, int m_max, int lo, int hi) {
  nlohmann::json rows = nlohmann::json::array();
  bool passed = true;
  for (int q : qs) {
    const auto rep = verify_algebra(q, m_max, lo, hi);
    rows.push_back({{"q", q}, {"m_max", m_max}, {"checks", rep.checks}, {"violations", rep.violations}, {"ok", rep.ok()}});
    passed = passed && rep.ok();
  }
  return {{"suite", "algebra"}, {"passed", passed}, {"range", {lo, hi}}, {"rows", rows}};
}

inline nlohmann::json weighted(const std::vector<int>& qs, int m_range, int m_max, double tol) {
  nlohmann::json rows = nlohmann::json::array();
  bool passed = true;
  for (int q : qs)
    for (int m = -m_range; m <= m_range; ++m) {
      const double v = weighted_norm(m, q, m_max);
      const bool ok = v <= 1.0 + tol;
      passed = passed && ok;
      rows.push_back({{"q", q}, {"m", m}, {"norm", v}, {"ok", ok}});
    }
  return {{"suite", "weighted_norm"}, {"passed", passed}, {"tolerance", tol}, {"rows", rows}};
}

// Gamma <= Delta on every dominated partition and Delta >= D on every irreducible one.
inline nlohmann::json gamma_delta(int q_max, int n_max, int b_max, std::size_t cap = 500000) {
  long checked = 0, irreducible = 0;
  nlohmann::json bad = nlohmann::json::array();
  for (int q = 1; q <= q_max; ++q)
    for (int n = 1; n <= n_max; ++n)
      for (const auto& b : voids_up_to(n, b_max)) {
        const Root root = Root::make(q, n, b);
        const long d = d_constant(root);
        EnumerateOptions eo;
        eo.max_count = cap;
        for (const auto& lam : enumerate_dominated(root, eo)) {
          ++checked;
          const long delta = delta_b(lam, root);
          const mpq_class gamma = gamma_b(lam, root);
          if (gamma > delta && bad.size() < 50)
            bad.push_back({{"root", root_json(root)}, {"lambda", lam.parts()}, {"kind", "gamma>delta"}});
          if (is_irreducible(lam, root)) {
            ++irreducible;
            if (delta < d && bad.size() < 50)
              bad.push_back({{"root", root_json(root)}, {"lambda", lam.parts()}, {"kind", "delta<D"}});
          }
        }
      }
  return {{"suite", "gamma_delta"}, {"passed", bad.empty()}, {"partitions", checked}, {"irreducible", irreducible},
          {"violations", bad}};
}

// log|w| <= (4q+1) Gamma - (N-1) log(1 - e^{-(4q+1)}).
inline nlohmann::json coefficient_bound(const std::vector<Root>& roots, double slack) {
  long checked = 0;
  double worst = -INFINITY;
  nlohmann::json bad = nlohmann::json::array();
  for (const auto& root : roots) {
    const double rate = 4.0 * root.q + 1.0;
    const auto exp = build_expansion(root, Geometry::planar());
    for (const auto& t : exp.terms) {
      ++checked;
      const double lhs = std::log(std::abs(t.w.get_d()));
      const double rhs = rate * t.gamma.get_d() - (root.n - 1) * std::log1p(-std::exp(-rate));
      worst = std::max(worst, lhs - rhs);
      if (lhs > rhs + slack && bad.size() < 50)
        bad.push_back({{"root", root_json(root)}, {"lambda", t.lambda.parts()}, {"w", rational_str(t.w)}});
    }
  }
  return {{"suite", "coefficient_bound"}, {"passed", bad.empty()}, {"terms", checked}, {"worst_log_margin", worst},
          {"violations", bad}};
}

// Squared irreducible norm <= exp(-C_q(gamma) D_{b,N}).
inline nlohmann::json irreducible_bound(const std::vector<Root>& roots, double gamma) {
  using std::exp;
  nlohmann::json rows = nlohmann::json::array();
  bool passed = true;
  for (const auto& root : roots) {
    const Precise c = c_constant<Precise>(root.q, Precise(gamma));
    if (!(c > 0)) throw PreconditionError("C_q(gamma) <= 0: the irreducible-norm bound needs a positive decay constant");
    const Precise lhs = irreducible_norm_squared<Precise>(root, Geometry::cylinder(gamma));
    const Precise rhs = exp(-c * d_constant(root));
    const bool ok = lhs <= rhs;
    passed = passed && ok;
    rows.push_back({{"root", root_json(root)}, {"irreducible_norm_squared", lhs.str(17)}, {"bound", rhs.str(17)},
                    {"ok", ok}});
  }
  return {{"suite", "irreducible_bound"}, {"passed", passed}, {"gamma", gamma}, {"rows", rows}};
}

// |Psi_N|^2 >= |Psi_{N1}|^2 |Psi_{N2}|^2 >= |Psi_{N1}|^2 over all splits of each root.
inline nlohmann::json supermultiplicativity(const std::vector<Root>& roots, double gamma) {
  const Geometry geo = Geometry::cylinder(gamma);
  std::map<std::pair<int, std::vector<int>>, Precise> memo;
  auto norm = [&](const Root& r) {
    auto key = std::make_pair(r.q, r.b.parts());
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    return memo.emplace(key, norm_squared<Precise>(build_expansion(r, geo))).first->second;
  };
  long splits = 0;
  nlohmann::json bad = nlohmann::json::array();
  for (const auto& root : roots) {
    const Precise whole = norm(root);
    for (int n1 = 1; n1 < root.n; ++n1) {
      ++splits;
      const Precise a = norm(segment_root(root, 0, n1));
      const Precise b = norm(segment_root(root, n1, root.n));
      if (!(whole >= a * b && a * b >= a))
        bad.push_back({{"root", root_json(root)}, {"n1", n1}});
    }
  }
  return {{"suite", "supermultiplicativity"}, {"passed", bad.empty()}, {"gamma", gamma}, {"splits", splits},
          {"violations", bad}};
}

inline nlohmann::json renewal_identity(const std::vector<Root>& roots, double gamma, double rel_tol) {
  nlohmann::json rows = nlohmann::json::array();
  bool passed = true;
  for (const auto& root : roots) {
    const auto rep = verify_renewal_identity<Precise>(root, Geometry::cylinder(gamma));
    const double err = to_double(rep.relative_error);
    const bool ok = err <= rel_tol;
    passed = passed && ok;
    rows.push_back({{"root", root_json(root)}, {"direct", rep.direct.str(17)}, {"segmented", rep.segmented.str(17)},
                    {"relative_error", err}, {"ok", ok}});
  }
  return {{"suite", "renewal_identity"}, {"passed", passed}, {"tolerance", rel_tol}, {"rows", rows}};
}

// sum_k <n_k> = N and sum_k k <n_k> = |root partition|.
inline nlohmann::json conservation(const std::vector<Root>& roots, double gamma, double tol) {
  nlohmann::json rows = nlohmann::json::array();
  bool passed = true;
  for (const auto& root : roots) {
    const auto exp = build_expansion(root, Geometry::cylinder(gamma));
    const Statistics st = statistics_for(root.q);
    const int top = root_partition(root).back();
    double count = 0, mom = 0;
    for (int k = 0; k <= top; ++k) {
      const double nk = expectation<double>(exp, LadderWord::number(k, st));
      count += nk;
      mom += k * nk;
    }
    const double weight = static_cast<double>(root_partition(root).weight());
    const bool ok = std::abs(count - root.n) <= tol && std::abs(mom - weight) <= tol;
    passed = passed && ok;
    rows.push_back({{"root", root_json(root)}, {"particles", count}, {"momentum", mom}, {"ok", ok}});
  }
  return {{"suite", "conservation"}, {"passed", passed}, {"gamma", gamma}, {"tolerance", tol}, {"rows", rows}};
}

// Pol_b(p_1, p_2, ...) = m_b at random rational points, |b| <= max_weight.
inline nlohmann::json symfun(int max_weight, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4), extra(0, 2);
  long checked = 0;
  nlohmann::json bad = nlohmann::json::array();
  for (int w = 0; w <= max_weight; ++w)
    for (const auto& mu : partitions_of(w)) {
      const SymPolynomial pol = transition_polynomial(mu);
      for (int s = 0; s < samples; ++s) {
        const int n = mu.length() + extra(rng);
        std::vector<int> b(static_cast<std::size_t>(n - mu.length()), 0);
        b.insert(b.end(), mu.begin(), mu.end());
        std::vector<mpq_class> pts;
        for (int i = 0; i < n; ++i) pts.emplace_back(num(rng), den(rng));
        for (auto& p : pts) p.canonicalize();
        std::vector<mpq_class> sums;
        for (int k = 1; k <= std::max(1, w); ++k) sums.push_back(power_sum_eval(k, pts));
        ++checked;
        const mpq_class lhs = n == 0 ? mpq_class(1) : monomial_eval(Partition(b), pts);
        if (pol.evaluate(sums) != lhs && bad.size() < 50) bad.push_back({{"b", b}, {"lhs", rational_str(lhs)}});
      }
    }
  return {{"suite", "symfun"}, {"passed", bad.empty()}, {"seed", seed}, {"checked", checked}, {"violations", bad}};
}

}  // namespace fqh::suites
