#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fqh/entanglement.hpp"
#include "fqh/errors.hpp"
#include "fqh/observables.hpp"
#include "fqh/renewal.hpp"
#include "fqh/suites.hpp"
#include "fqh/wavefunction.hpp"

using nlohmann::json;
using namespace fqh;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  int q = 2;
  int n = 2;
  std::string b = "zeros";
  double gamma = 5.0;
  std::string geometry = "cylinder";
  std::string route = "permutation";
  int cut = -1;
  int cut_block = 0;
  std::string family = "density";
  std::string distances = "2..8";
  bool check = false;
  std::string suite = "oracle";
  int oracle_n_max = 4;
  int mmax = 8;
  int mrange = 6;
  std::string toy;
  int n_max = 12;
  int horizon = 8;
  int pressure_n_max = 10;
  std::vector<std::string> suffixes = {"0", "0,1"};
  std::uint64_t seed = 0;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::size_t max_partitions = 500000;
  std::string format = "json";
  std::string output;
};

std::vector<int> parse_ints(const std::string& s, const std::string& field) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError(field + ": '" + tok + "' is not an integer");
    }
  }
  return out;
}

Root resolve_root(const RunConfig& c) {
  if (c.q < 1) throw UsageError("--q must be >= 1");
  if (c.n < 1) throw UsageError("--n must be >= 1");
  std::vector<int> b = c.b == "zeros" ? std::vector<int>(static_cast<std::size_t>(c.n), 0) : parse_ints(c.b, "--b");
  if (static_cast<int>(b.size()) != c.n)
    throw UsageError("--b: expected " + std::to_string(c.n) + " entries (one per particle), got " + std::to_string(b.size()));
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i] < 0 || (i > 0 && b[i] < b[i - 1])) throw UsageError("--b: entries must be non-negative and non-decreasing");
  return Root::make(c.q, c.n, Partition(b));
}

std::vector<int> parse_distances(const std::string& s) {
  auto dots = s.find("..");
  if (dots == std::string::npos) return parse_ints(s, "--distances");
  const auto lo = parse_ints(s.substr(0, dots), "--distances"), hi = parse_ints(s.substr(dots + 2), "--distances");
  if (lo.size() != 1 || hi.size() != 1 || lo[0] > hi[0]) throw UsageError("--distances: expected a..b with a <= b");
  std::vector<int> out;
  for (int d = lo[0]; d <= hi[0]; ++d) out.push_back(d);
  return out;
}

BuildOptions build_options(const RunConfig& c) {
  BuildOptions o;
  o.threads = c.threads;
  o.max_partitions = c.max_partitions;
  if (c.route == "permutation") {
    o.route = Route::permutation_sum;
  } else if (c.route == "boundary") {
    o.route = Route::boundary_charge;
  } else {
    throw UsageError("--route must be 'permutation' or 'boundary'");
  }
  return o;
}

Geometry resolve_geometry(const RunConfig& c) {
  if (c.geometry == "planar") return Geometry::planar();
  if (c.geometry != "cylinder") throw UsageError("--geometry must be 'planar' or 'cylinder'");
  if (!(c.gamma > 0)) throw UsageError("--gamma must be > 0 for the cylinder");
  return Geometry::cylinder(c.gamma);
}

json config_json(const RunConfig& c) {
  json j = {{"command", c.command}, {"threads", c.threads}, {"max_partitions", c.max_partitions}, {"format", c.format}};
  if (c.command == "expand" || c.command == "entangle" || c.command == "correlate") {
    j["q"] = c.q;
    j["n"] = c.n;
    j["b"] = c.b;
    j["gamma"] = c.gamma;
  }
  if (c.command == "expand") {
    j["geometry"] = c.geometry;
    j["route"] = c.route;
  } else if (c.command == "entangle") {
    j["cut"] = c.cut;
    j["cut_block"] = c.cut_block;
  } else if (c.command == "correlate") {
    j["family"] = c.family;
    j["distances"] = c.distances;
    j["check"] = c.check;
  } else if (c.command == "verify") {
    j["suite"] = c.suite;
    j["oracle_n_max"] = c.oracle_n_max;
    j["mmax"] = c.mmax;
    j["mrange"] = c.mrange;
    j["gamma"] = c.gamma;
    j["seed"] = c.seed;
  } else if (c.command == "renewal") {
    j["toy"] = c.toy;
    j["q"] = c.q;
    j["gamma"] = c.gamma;
    j["n_max"] = c.n_max;
    j["horizon"] = c.horizon;
    j["pressure_n_max"] = c.pressure_n_max;
    j["suffixes"] = c.suffixes;
  }
  return j;
}

struct Output {
  json report;
  std::string csv;  // body rows; the config is prepended as a comment line
  bool passed = true;
};

Output cmd_expand(const RunConfig& c) {
  const Root root = resolve_root(c);
  const auto exp = build_expansion(root, resolve_geometry(c), build_options(c));
  return {to_json(exp), to_csv(exp), true};
}

Output cmd_entangle(const RunConfig& c) {
  const Root root = resolve_root(c);
  if (!(c.gamma > 0)) throw UsageError("--gamma must be > 0");
  const BuildOptions opt = build_options(c);
  json rep;
  SchmidtDecomposition spec;
  bool passed = true;
  if (c.cut_block > 0 || c.cut >= 0) {
    bool boundary = c.cut_block > 0;
    int cut = c.cut;
    if (!boundary)
      for (int n1 = 1; n1 < root.n; ++n1) boundary = boundary || block_boundary(root, n1) == cut;
    if (boundary) {
      const GapReport g = c.cut_block > 0 ? entanglement_gap_check(root, c.gamma, c.cut_block, opt)
                                          : entanglement_gap_check_at(root, c.gamma, cut, opt);
      rep = to_json(g);
      spec = g.spectrum;
      passed = g.ok();
    } else {
      spec = schmidt_spectrum(build_expansion(root, Geometry::cylinder(c.gamma), opt), cut);
      rep = to_json(spec);
      rep["gap_bound"] = nullptr;
      rep["note"] = "cut is not a root-block boundary; no bound asserted";
    }
  } else {
    throw UsageError("entangle needs --cut or --cut-block");
  }
  std::string csv = "index,schmidt_value,entanglement_energy\n";
  const auto es = spec.entanglement_spectrum();
  for (std::size_t i = 0; i < spec.values.size(); ++i)
    csv += std::to_string(i) + "," + format_double(spec.values[i]) + "," + format_double(es[i]) + "\n";
  return {rep, csv, passed};
}

Output cmd_correlate(const RunConfig& c) {
  if (c.family != "density") throw UsageError("--family: only 'density' is supported");
  const Root root = resolve_root(c);
  if (!(c.gamma > 0)) throw UsageError("--gamma must be > 0");
  const int top = root_partition(root).back();
  std::vector<int> ds;
  for (int d : parse_distances(c.distances)) {
    if (d < 1) throw UsageError("--distances must be positive");
    if (d <= top) ds.push_back(d);
  }
  if (ds.empty()) throw UsageError("--distances: no distance fits inside the orbital range 0.." + std::to_string(top));
  if (c.check && c_constant(root.q, c.gamma) <= 0) throw PreconditionError("C_q(gamma) <= 0: no decay bound to check");
  const auto rep = clustering_scan(root, c.gamma, ds, build_options(c));
  std::string csv = "distance,value,bound,left\n";
  for (const auto& r : rep.rows)
    csv += std::to_string(r.distance) + "," + format_double(r.value) + "," + format_double(r.bound) + "," +
           std::to_string(r.left) + "\n";
  return {to_json(rep), csv, !c.check || rep.ok()};
}

Output cmd_renewal(const RunConfig& c) {
  json rep;
  bool passed = true;
  std::string csv = "n,scaled,residual\n";
  auto rows = [&](const json& f) {
    for (std::size_t i = 0; i < f["residuals"].size(); ++i)
      csv += std::to_string(i + 1) + "," + f["scaled"][i].get<std::string>() + "," + f["residuals"][i].get<std::string>() + "\n";
  };
  if (!c.toy.empty()) {
    RenewalSystem<mpq_class> sys;
    if (c.toy == "geometric") {
      sys = geometric_toy<mpq_class>();
    } else if (c.toy == "unit") {
      sys = unit_toy<mpq_class>();
    } else {
      throw UsageError("--toy must be 'geometric' or 'unit'");
    }
    const auto r = radius(sys, mpq_class(1, 1000000000));
    const auto f = feller_limit(sys, r.r, c.n_max);
    rep = to_json(f);
    rep["series_identity_residual"] = rational_str(series_identity_residual(sys, solve_C(sys, c.n_max)));
    rep["pressure"] = json::array();
    passed = f.exact;
    rows(rep);
    return {rep, csv, passed};
  }
  if (c.horizon < 1 || c.n_max < 1) throw UsageError("--horizon and --n-max must be >= 1");
  if (c_constant(c.q, c.gamma) <= 0) throw PreconditionError("C_q(gamma) <= 0: renewal bounds need a positive decay constant");
  BuildOptions opt = build_options(c);
  const auto sys = laughlin_system<Precise>(c.q, c.gamma, c.horizon, opt);
  const auto r = radius(sys, Precise(0));
  const auto f = feller_limit(sys, r.r, c.n_max);
  rep = to_json(f);
  rep["series_identity_residual"] = real_str(series_identity_residual(sys, solve_C(sys, c.n_max)));
  json press = json::array();
  std::vector<double> slopes;
  for (const auto& s : c.suffixes) {
    const auto p = pressure(c.q, c.gamma, c.pressure_n_max, parse_ints(s, "--suffix"), c.horizon, 8, opt);
    press.push_back(to_json(p));
    slopes.push_back(p.slope);
    passed = passed && p.superadditive;
  }
  rep["pressure"] = press;
  const bool same_rate = slopes.empty() || *std::max_element(slopes.begin(), slopes.end()) -
                                                   *std::min_element(slopes.begin(), slopes.end()) <= 1e-6;
  rep["suffix_independent"] = same_rate;
  passed = passed && f.geometric && f.rate_ok && same_rate;
  rows(rep);
  return {rep, csv, passed};
}

Output cmd_verify(const RunConfig& c) {
  std::vector<std::string> names;
  if (c.suite == "all") {
    names = {"oracle", "algebra", "weighted", "bounds", "symfun", "conservation", "renewal", "entangle", "clustering"};
  } else {
    std::stringstream ss(c.suite);
    std::string tok;
    while (std::getline(ss, tok, ',')) names.push_back(tok);
  }
  json suites_out = json::array();
  bool passed = true;
  std::vector<int> ns;
  for (int n = 2; n <= c.oracle_n_max; ++n) ns.push_back(n);
  auto add = [&](json j) {
    passed = passed && j["passed"].get<bool>();
    suites_out.push_back(std::move(j));
  };
  for (const auto& name : names) {
    if (name == "oracle") {
      add(suites::oracle(suites::grid_roots({1, 2, 3}, ns), c.threads));
    } else if (name == "algebra") {
      add(suites::algebra({1, 2, 3}, c.mmax, -c.mrange, c.mrange));
    } else if (name == "weighted") {
      add(suites::weighted({1, 2, 3}, c.mrange, c.mmax, 1e-9));
    } else if (name == "bounds") {
      std::vector<Root> laughlin;
      for (int n = 1; n <= 6; ++n) laughlin.push_back(Root::laughlin(2, n));
      add(suites::gamma_delta(3, 6, 4));
      add(suites::coefficient_bound(suites::grid_roots({1, 2, 3}, {2, 3, 4, 5}), 1e-12));
      add(suites::irreducible_bound(laughlin, c.gamma));
      add(suites::supermultiplicativity(laughlin, c.gamma));
      add(suites::renewal_identity(laughlin, c.gamma, 1e-10));
    } else if (name == "symfun") {
      add(suites::symfun(6, 3, c.seed));
    } else if (name == "conservation") {
      add(suites::conservation(suites::grid_roots({1, 2, 3}, ns), c.gamma, 1e-10));
    } else if (name == "renewal") {
      RunConfig rc = c;
      rc.toy = "geometric";
      const Output toy = cmd_renewal(rc);
      rc.toy.clear();
      rc.q = 2;
      const Output lau = cmd_renewal(rc);
      add({{"suite", "renewal"}, {"passed", toy.passed && lau.passed}, {"toy", toy.report}, {"laughlin", lau.report}});
    } else if (name == "entangle") {
      const auto g = entanglement_gap_check(Root::laughlin(2, 4), c.gamma, 2, build_options(c));
      const auto d = factorization_distance<double>(Root::laughlin(2, 4), 2, Geometry::cylinder(c.gamma), build_options(c));
      json j = to_json(g);
      j["factorization_distance"] = d.distance;
      j["factorization_bound"] = d.bound;
      add({{"suite", "entangle"}, {"passed", g.ok() && d.distance <= d.bound}, {"report", j}});
    } else if (name == "clustering") {
      const auto rep = clustering_scan(Root::laughlin(2, 6), c.gamma, {2, 3, 4, 5, 6, 7, 8}, build_options(c));
      add({{"suite", "clustering"}, {"passed", rep.ok()}, {"report", to_json(rep)}});
    } else {
      throw UsageError("--suite: unknown suite '" + name + "'");
    }
  }
  std::string csv = "suite,passed\n";
  for (const auto& s : suites_out) csv += s["suite"].get<std::string>() + "," + (s["passed"].get<bool>() ? "true" : "false") + "\n";
  return {{{"suites", suites_out}, {"passed", passed}}, csv, passed};
}

void emit(const RunConfig& c, const Output& out) {
  std::string text;
  if (c.format == "json") {
    json doc = {{"config", config_json(c)}, {"result", out.report}};
    text = doc.dump(2) + "\n";
  } else {
    text = "# config " + config_json(c).dump() + "\n" + out.csv;
  }
  if (c.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(c.output);
    if (!f) throw UsageError("--output: cannot open '" + c.output + "'");
    f << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laughlin-state expansions via the matrix product representation"};
  app.require_subcommand(1);
  RunConfig c;
  if (const char* env = std::getenv("FQH_MAX_PARTITIONS")) {
    try {
      c.max_partitions = std::stoul(env);
    } catch (const std::exception&) {
      std::cerr << "error: FQH_MAX_PARTITIONS must be a positive integer\n";
      return 2;
    }
  }

  auto common = [&](CLI::App* s) {
    s->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
    s->add_option("--max-partitions", c.max_partitions, "cap on dominated partitions per expansion")
        ->check(CLI::PositiveNumber);
    s->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    s->add_option("--output,-o", c.output, "output file (default stdout)");
  };
  auto state = [&](CLI::App* s) {
    s->add_option("--q", c.q, "Vandermonde power")->required();
    s->add_option("--n", c.n, "particle number")->required();
    s->add_option("--b", c.b, "void partition: comma-separated non-decreasing integers or 'zeros'");
    s->add_option("--gamma", c.gamma, "inverse cylinder radius");
  };

  auto* expand = app.add_subcommand("expand", "occupation-basis expansion");
  state(expand);
  expand->add_option("--geometry", c.geometry, "planar or cylinder");
  expand->add_option("--route", c.route, "permutation or boundary");
  common(expand);

  auto* verify = app.add_subcommand("verify", "verification suites");
  verify->add_option("--suite", c.suite,
                     "comma list of oracle, algebra, weighted, bounds, symfun, conservation, renewal, entangle, "
                     "clustering, or 'all'");
  verify->add_option("--oracle-n-max", c.oracle_n_max, "largest N in the oracle grid");
  verify->add_option("--mmax", c.mmax, "largest grade for the algebra and norm suites");
  verify->add_option("--mrange", c.mrange, "operator indices in [-mrange, mrange]");
  verify->add_option("--gamma", c.gamma, "inverse cylinder radius for bound suites");
  verify->add_option("--seed", c.seed, "seed for random sampling");
  verify->add_option("--horizon", c.horizon, "largest irreducible segment fed to the renewal suite");
  common(verify);

  auto* entangle = app.add_subcommand("entangle", "Schmidt spectrum across an orbital cut");
  state(entangle);
  entangle->add_option("--cut", c.cut, "orbital cut x (left = orbitals < x)");
  entangle->add_option("--cut-block", c.cut_block, "cut after this many root blocks");
  common(entangle);

  auto* correlate = app.add_subcommand("correlate", "connected correlators against distance");
  state(correlate);
  correlate->add_option("--family", c.family, "observable family (density)");
  correlate->add_option("--distances", c.distances, "a..b or comma list");
  correlate->add_flag("--check", c.check, "exit 1 unless the decay checks pass");
  common(correlate);

  auto* renewal = app.add_subcommand("renewal", "renewal equation and pressure");
  renewal->add_option("--toy", c.toy, "geometric or unit (exact rational systems)");
  renewal->add_option("--q", c.q, "Vandermonde power for the Laughlin feed");
  renewal->add_option("--gamma", c.gamma, "inverse cylinder radius");
  renewal->add_option("--n-max", c.n_max, "number of renewal terms");
  renewal->add_option("--horizon", c.horizon, "largest irreducible segment included");
  renewal->add_option("--pressure-n-max", c.pressure_n_max, "largest N for the pressure sequence");
  renewal->add_option("--suffix", c.suffixes, "b suffixes for the pressure families (repeatable)");
  common(renewal);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    Output out;
    if (c.command == "expand") {
      out = cmd_expand(c);
    } else if (c.command == "verify") {
      out = cmd_verify(c);
    } else if (c.command == "entangle") {
      out = cmd_entangle(c);
    } else if (c.command == "correlate") {
      out = cmd_correlate(c);
    } else {
      out = cmd_renewal(c);
    }
    emit(c, out);
    return out.passed ? 0 : 1;
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
