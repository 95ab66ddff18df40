#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "fqh/errors.hpp"
#include "fqh/partitions.hpp"
#include "fqh/wavefunction.hpp"

namespace fqh {

struct SchmidtDecomposition {
  int cut = 0;
  std::vector<double> values;  // descending, each above the tail threshold
  int tail_count = 0;          // singular values below 1e-14

  std::vector<double> entanglement_spectrum() const {
    std::vector<double> es;
    for (double v : values) es.push_back(-2.0 * std::log(v) + 0.0);
    return es;
  }
  double largest_eigenvalue() const { return values.empty() ? 0.0 : values.front() * values.front(); }
};

inline constexpr double kSchmidtTail = 1e-14;

// Singular values of the normalized coefficient matrix indexed by (left pattern, right pattern),
// left = orbitals < cut. Sectors with fixed left particle number and momentum are independent.
inline SchmidtDecomposition schmidt_spectrum(const WavefunctionExpansion& exp, int cut) {
  require(exp.geometry.is_cylinder(), "schmidt_spectrum needs the cylinder geometry");
  const int top = root_partition(exp.root).back();
  require(cut >= 0 && cut <= top + 1, "cut must lie in [0, max orbital + 1]");
  double norm = 0;
  for (const auto& t : exp.terms) norm += t.h * t.h;
  norm = std::sqrt(norm);

  struct Block {
    std::map<std::vector<int>, int> rows, cols;
    std::vector<std::tuple<int, int, double>> entries;
  };
  std::map<std::pair<int, long>, Block> blocks;
  for (const auto& t : exp.terms) {
    std::vector<int> left, right;
    long mom = 0;
    for (int v : t.lambda) {
      if (v < cut) {
        left.push_back(v);
        mom += v;
      } else {
        right.push_back(v);
      }
    }
    Block& b = blocks[{static_cast<int>(left.size()), mom}];
    const int r = b.rows.emplace(left, static_cast<int>(b.rows.size())).first->second;
    const int c = b.cols.emplace(right, static_cast<int>(b.cols.size())).first->second;
    b.entries.emplace_back(r, c, t.h / norm);
  }

  SchmidtDecomposition out;
  out.cut = cut;
  std::vector<double> all;
  for (const auto& [key, b] : blocks) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(b.rows.size()), static_cast<Eigen::Index>(b.cols.size()));
    for (const auto& [r, c, v] : b.entries) m(r, c) += v;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) all.push_back(svd.singularValues()(i));
  }
  std::sort(all.begin(), all.end(), std::greater<>());
  for (double v : all) {
    if (v >= kSchmidtTail) {
      out.values.push_back(v);
    } else {
      ++out.tail_count;
    }
  }
  return out;
}

// First orbital after the first n1 elementary blocks of the root tiling.
inline int block_boundary(const Root& root, int n1) {
  require(1 <= n1 && n1 < root.n, "block boundary needs 1 <= N1 < N");
  return root.q * n1 + root.b[n1 - 1];
}

struct GapReport {
  int cut = 0;
  int n1 = 0;
  double c_constant = 0;
  double largest_eigenvalue = 0;
  double bound = 0;
  SchmidtDecomposition spectrum;
  bool ok() const { return largest_eigenvalue >= bound; }
};

inline double gap_bound(int q, double c) { return 1.0 - 4.0 * std::sqrt(2.0) / std::sqrt(std::expm1(c * q)); }

inline GapReport entanglement_gap_check(const Root& root, double gamma, int n1, const BuildOptions& opt = {}) {
  const double c = c_constant(root.q, gamma);
  if (c <= 0) throw PreconditionError("C_q(gamma) <= 0: the gap bound needs a positive decay constant");
  GapReport rep;
  rep.n1 = n1;
  rep.cut = block_boundary(root, n1);
  rep.c_constant = c;
  rep.bound = gap_bound(root.q, c);
  rep.spectrum = schmidt_spectrum(build_expansion(root, Geometry::cylinder(gamma), opt), rep.cut);
  rep.largest_eigenvalue = rep.spectrum.largest_eigenvalue();
  return rep;
}

// Same check for an orbital cut, which must sit on a block boundary.
inline GapReport entanglement_gap_check_at(const Root& root, double gamma, int cut, const BuildOptions& opt = {}) {
  for (int n1 = 1; n1 < root.n; ++n1)
    if (block_boundary(root, n1) == cut) return entanglement_gap_check(root, gamma, n1, opt);
  throw PreconditionError("cut " + std::to_string(cut) + " is not a root-block boundary");
}

inline nlohmann::json to_json(const SchmidtDecomposition& s) {
  return {{"cut", s.cut}, {"values", s.values}, {"entanglement_spectrum", s.entanglement_spectrum()},
          {"tail_count", s.tail_count}};
}

inline nlohmann::json to_json(const GapReport& r) {
  nlohmann::json j = to_json(r.spectrum);
  j["n1"] = r.n1;
  j["c_constant"] = r.c_constant;
  j["largest_eigenvalue"] = r.largest_eigenvalue;
  j["gap_bound"] = r.bound;
  j["ok"] = r.ok();
  return j;
}

}  // namespace fqh
