#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

#include "fqh/errors.hpp"
#include "fqh/fock.hpp"
#include "fqh/partitions.hpp"
#include "fqh/scalar.hpp"
#include "fqh/symfun.hpp"

namespace fqh {

// Vector inside one grade H(M). The coefficient of basis state s is
//   num[s] / den * sqrt(q)^(modes(s) + shift),
// which keeps every operator of the W-algebra integral up to a common denominator.
struct GradeVector {
  int grade = 0;
  int shift = 0;
  mpz_class den = 1;
  std::vector<mpz_class> num;

  bool is_zero() const {
    return std::all_of(num.begin(), num.end(), [](const mpz_class& x) { return sgn(x) == 0; });
  }

  void normalize() {
    if (sgn(den) < 0) {
      den = -den;
      for (auto& x : num) x = -x;
    }
    mpz_class g = den;
    for (const auto& x : num) {
      if (g == 1) break;
      if (sgn(x) != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    }
    if (is_zero()) {
      den = 1;
      return;
    }
    if (g != 1) {
      den /= g;
      for (auto& x : num)
        if (sgn(x) != 0) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    }
  }
};

// Operator kernels of the mode algebra for a fixed Jastrow power q.
class ModeAlgebra {
 public:
  static ModeAlgebra& for_q(int q) {
    require(q >= 1, "q must be >= 1");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<ModeAlgebra>> reg;
    std::lock_guard lock(mu);
    auto& slot = reg[q];
    if (!slot) slot.reset(new ModeAlgebra(q));
    return *slot;
  }

  int q() const { return q_; }

  GradeVector zero(int grade) const {
    GradeVector v;
    v.grade = grade;
    if (grade >= 0) v.num.assign(tables().grade(grade).states.size(), 0);
    return v;
  }
  GradeVector vacuum() const {
    GradeVector v = zero(0);
    v.num[0] = 1;
    return v;
  }
  // The basis state itself (actual coefficient 1).
  GradeVector basis_vector(int grade, int index) const {
    GradeVector v = zero(grade);
    v.num[index] = 1;
    v.shift = -tables().grade(grade).modes[index];
    return v;
  }

  // D^-_k: multiplication by sum_u sqrt(q)^{#u} / z_u a_u^*, u running over partitions of k.
  GradeVector d_minus(int k, const GradeVector& v) const {
    if (k < 0 || v.grade < 0) return zero(-1);
    if (k == 0) return v;
    const int t = v.grade + k;
    GradeVector out = zero(t);
    out.shift = v.shift;
    out.den = v.den * factorial(k);
    accumulate_d_minus(k, v.grade, v.num, class_sizes(k), out.num);
    out.normalize();
    return out;
  }

  // D^+_l: removal of sub-multisets u of weight l with (-sqrt(q))^{#u} prod_j C(s_j, u_j).
  GradeVector d_plus(int l, const GradeVector& v) const {
    if (l < 0 || v.grade < 0 || l > v.grade) return zero(-1);
    if (l == 0) return v;
    GradeVector out = zero(v.grade - l);
    out.shift = v.shift;
    out.den = v.den;
    const auto& rem = tables().removals(v.grade);
    const auto& coef = removal_coefficients(v.grade);
    for (std::size_t s = 0; s < v.num.size(); ++s) {
      if (sgn(v.num[s]) == 0) continue;
      for (std::size_t r = 0; r < rem[s].size(); ++r)
        if (rem[s][r].ell == l) mpz_addmul(out.num[rem[s][r].target].get_mpz_t(), v.num[s].get_mpz_t(), coef[s][r].get_mpz_t());
    }
    out.normalize();
    return out;
  }

  // W_m = sum_l D^-_{m+l} D^+_l; on H(M) only l = 0..M contribute.
  GradeVector w(int m, const GradeVector& v) const {
    const int g = v.grade;
    const int t = g + m;
    if (g < 0 || t < 0) return zero(-1);
    GradeVector out = zero(t);
    out.shift = v.shift;
    if (v.is_zero()) return out;

    const auto& rem = tables().removals(g);
    const auto& coef = removal_coefficients(g);
    std::vector<std::vector<mpz_class>> y(static_cast<std::size_t>(g) + 1);
    for (int l = std::max(0, -m); l <= g; ++l) y[l].assign(tables().grade(g - l).states.size(), 0);
    for (std::size_t s = 0; s < v.num.size(); ++s) {
      if (sgn(v.num[s]) == 0) continue;
      for (std::size_t r = 0; r < rem[s].size(); ++r) {
        const auto& e = rem[s][r];
        if (m + e.ell < 0) continue;
        mpz_addmul(y[e.ell][e.target].get_mpz_t(), v.num[s].get_mpz_t(), coef[s][r].get_mpz_t());
      }
    }
    // Common denominator t! for all D^-_k with k <= t.
    const mpz_class tf = factorial(t);
    out.den = v.den * tf;
    for (int l = std::max(0, -m); l <= g; ++l) {
      const int k = m + l;
      std::vector<mpz_class> mult = class_sizes(k);
      const mpz_class scale = tf / factorial(k);
      for (auto& x : mult) x *= scale;
      accumulate_d_minus(k, g - l, y[l], mult, out.num);
    }
    out.normalize();
    return out;
  }

  GradeVector create(int n, const GradeVector& v) const {
    require(n >= 1, "mode index must be >= 1");
    if (v.grade < 0) return zero(-1);
    GradeVector out = zero(v.grade + n);
    out.shift = v.shift - 1;
    out.den = v.den;
    const auto& src = tables().grade(v.grade);
    const auto& dst = tables().grade(v.grade + n);
    for (std::size_t s = 0; s < v.num.size(); ++s)
      if (sgn(v.num[s]) != 0) out.num[dst.index.at(src.states[s].raised(n))] += v.num[s];
    return out;
  }

  GradeVector annihilate(int n, const GradeVector& v) const {
    require(n >= 1, "mode index must be >= 1");
    if (v.grade < n) return zero(-1);
    GradeVector out = zero(v.grade - n);
    out.shift = v.shift + 1;
    out.den = v.den;
    const auto& src = tables().grade(v.grade);
    const auto& dst = tables().grade(v.grade - n);
    for (std::size_t s = 0; s < v.num.size(); ++s) {
      const int c = src.states[s].count(n);
      if (c == 0 || sgn(v.num[s]) == 0) continue;
      out.num[dst.index.at(src.states[s].lowered(n))] += v.num[s] * (static_cast<long>(n) * c);
    }
    out.normalize();
    return out;
  }

  GradeVector times_sqrt_q(GradeVector v) const {
    ++v.shift;
    return v;
  }
  GradeVector scaled(GradeVector v, const mpq_class& c) const {
    for (auto& x : v.num) x *= c.get_num();
    v.den *= c.get_den();
    v.normalize();
    return v;
  }

  // a + b; both must live in the same grade unless one of them is zero.
  GradeVector add(const GradeVector& a, const GradeVector& b) const {
    if (a.grade < 0 || a.is_zero()) return b;
    if (b.grade < 0 || b.is_zero()) return a;
    require(a.grade == b.grade, "adding vectors from different grades");
    require((a.shift - b.shift) % 2 == 0, "adding vectors from different sqrt(q) sectors");
    const int s = std::min(a.shift, b.shift);
    const mpz_class fa = qpow((a.shift - s) / 2) * b.den;
    const mpz_class fb = qpow((b.shift - s) / 2) * a.den;
    GradeVector out = zero(a.grade);
    out.shift = s;
    out.den = a.den * b.den;
    for (std::size_t i = 0; i < out.num.size(); ++i) out.num[i] = a.num[i] * fa + b.num[i] * fb;
    out.normalize();
    return out;
  }
  GradeVector sub(const GradeVector& a, const GradeVector& b) const { return add(a, scaled(b, -1)); }

  bool equal(const GradeVector& a, const GradeVector& b) const {
    const bool za = a.grade < 0 || a.is_zero();
    const bool zb = b.grade < 0 || b.is_zero();
    if (za || zb) return za && zb;
    if (a.grade != b.grade || (a.shift - b.shift) % 2 != 0) return false;
    return sub(a, b).is_zero();
  }

  FockVector to_fock(const GradeVector& v) const {
    FockVector out;
    if (v.grade < 0) return out;
    const auto& gr = tables().grade(v.grade);
    for (std::size_t s = 0; s < v.num.size(); ++s) {
      if (sgn(v.num[s]) == 0) continue;
      mpq_class c(v.num[s], v.den);
      c.canonicalize();
      out.add(gr.states[s], Scalar::sqrt_q_pow(q_, gr.modes[s] + v.shift) * c);
    }
    return out;
  }

  // Splits a FockVector into single-grade pieces with shift 0 or 1.
  std::vector<GradeVector> from_fock(const FockVector& v) const {
    // (grade, shift) -> index -> stored rational
    std::map<std::pair<int, int>, std::map<int, mpq_class>> parts;
    for (const auto& [s, c] : v.terms()) {
      require(c.q() == 0 || c.q() == q_, "scalar context does not match q");
      const int grade = static_cast<int>(s.momentum());
      const int idx = tables().grade(grade).index.at(s);
      const int modes = s.mode_count();
      // rat = y sqrt(q)^(modes + shift) with modes + shift even; surd: modes + shift odd.
      if (sgn(c.rat()) != 0) {
        const int shift = modes % 2;
        parts[{grade, shift}][idx] += c.rat() / mpq_class(qpow((modes + shift) / 2));
      }
      if (sgn(c.surd()) != 0) {
        const int shift = 1 - modes % 2;
        parts[{grade, shift}][idx] += c.surd() / mpq_class(qpow((modes + shift - 1) / 2));
      }
    }
    std::vector<GradeVector> out;
    for (const auto& [key, entries] : parts) {
      GradeVector piece = zero(key.first);
      piece.shift = key.second;
      mpz_class l = 1;
      for (const auto& [idx, x] : entries) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
      piece.den = l;
      for (const auto& [idx, x] : entries) piece.num[idx] = x.get_num() * (l / x.get_den());
      piece.normalize();
      if (!piece.is_zero()) out.push_back(std::move(piece));
    }
    return out;
  }

  // Unnormalized matrix entries of W_m from H(M): coefficient of e_{s'} in W_m e_s, as doubles.
  Eigen::MatrixXd w_block(int m, int grade) const {
    const int t = grade + m;
    if (grade < 0 || t < 0) return Eigen::MatrixXd(0, 0);
    const auto& src = tables().grade(grade);
    const auto& dst = tables().grade(t);
    Eigen::MatrixXd a(dst.states.size(), src.states.size());
    const double sq = std::sqrt(static_cast<double>(q_));
    for (std::size_t s = 0; s < src.states.size(); ++s) {
      GradeVector col = w(m, basis_vector(grade, static_cast<int>(s)));
      for (std::size_t r = 0; r < dst.states.size(); ++r) {
        mpq_class c(col.num[r], col.den);
        a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) =
            c.get_d() * std::pow(sq, dst.modes[r] + col.shift);
      }
    }
    return a;
  }

 private:
  explicit ModeAlgebra(int q) : q_(q) {}

  static GradeTables& tables() { return GradeTables::instance(); }

  mpz_class qpow(int e) const {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(q_), static_cast<unsigned long>(e));
    return r;
  }

  // k!/z_u for each u in the basis of H(k).
  static std::vector<mpz_class> class_sizes(int k) {
    const auto& gr = tables().grade(k);
    const mpz_class kf = factorial(k);
    std::vector<mpz_class> out;
    out.reserve(gr.norm.size());
    for (const auto& z : gr.norm) out.push_back(kf / z);
    return out;
  }

  static void accumulate_d_minus(int k, int src_grade, const std::vector<mpz_class>& src,
                                 const std::vector<mpz_class>& mult, std::vector<mpz_class>& dst) {
    const auto& tab = tables().union_table(src_grade, k);
    const std::size_t pk = mult.size();
    for (std::size_t t = 0; t < src.size(); ++t) {
      if (sgn(src[t]) == 0) continue;
      const int* row = tab.data() + t * pk;
      for (std::size_t u = 0; u < pk; ++u)
        mpz_addmul(dst[row[u]].get_mpz_t(), src[t].get_mpz_t(), mult[u].get_mpz_t());
    }
  }

  // (-q)^{#u} prod_j C(s_j, u_j), laid out like GradeTables::removals(grade).
  const std::vector<std::vector<mpz_class>>& removal_coefficients(int grade) const {
    std::lock_guard lock(mu_);
    auto& slot = coef_[grade];
    if (!slot) {
      const auto& rem = tables().removals(grade);
      auto tab = std::make_unique<std::vector<std::vector<mpz_class>>>(rem.size());
      for (std::size_t s = 0; s < rem.size(); ++s)
        for (const auto& e : rem[s]) {
          mpz_class c = qpow(e.modes) * e.binom;
          if (e.modes % 2) c = -c;
          (*tab)[s].push_back(c);
        }
      slot = std::move(tab);
    }
    return *slot;
  }

  int q_;
  mutable std::mutex mu_;
  mutable std::map<int, std::unique_ptr<std::vector<std::vector<mpz_class>>>> coef_;
};

// ---- FockVector-level operators -------------------------------------------------------

// D^-_l via l D^-_l = sqrt(q) sum_{n=1..l} a_n^* D^-_{l-n}.
inline FockVector apply_D_minus(int l, const FockVector& v, int q) {
  if (l < 0) return {};
  std::vector<FockVector> d{v};
  const Scalar sq = Scalar::sqrt_q(q);
  for (int k = 1; k <= l; ++k) {
    FockVector acc;
    for (int n = 1; n <= k; ++n) acc += apply_creation(n, d[k - n]);
    acc *= sq * Scalar(mpq_class(1, k));
    d.push_back(std::move(acc));
  }
  return d[l];
}

// D^+_l via l D^+_l = -sqrt(q) sum_{n=1..l} a_n D^+_{l-n}.
inline FockVector apply_D_plus(int l, const FockVector& v, int q) {
  if (l < 0) return {};
  std::vector<FockVector> d{v};
  const Scalar sq = Scalar::sqrt_q(q);
  for (int k = 1; k <= l; ++k) {
    FockVector acc;
    for (int n = 1; n <= k; ++n) acc += apply_annihilation(n, d[k - n]);
    acc *= -sq * Scalar(mpq_class(1, k));
    d.push_back(std::move(acc));
  }
  return d[l];
}

inline FockVector apply_W(int m, const FockVector& v, int q) {
  const ModeAlgebra& alg = ModeAlgebra::for_q(q);
  FockVector out;
  for (const auto& piece : alg.from_fock(v)) out += alg.to_fock(alg.w(m, piece));
  return out;
}

// ---- vacuum amplitudes -----------------------------------------------------------------

// Evaluates W_{k_N} ... W_{k_1} |0>, reusing the longest common prefix with the previous call.
class AmplitudeEvaluator {
 public:
  explicit AmplitudeEvaluator(int q) : alg_(&ModeAlgebra::for_q(q)) {}

  const GradeVector& state(const std::vector<int>& k) {
    std::size_t c = 0;
    while (c < k.size() && c < prefix_.size() && prefix_[c] == k[c]) ++c;
    prefix_.resize(c);
    stack_.resize(c);
    while (prefix_.size() < k.size()) {
      const GradeVector& prev = stack_.empty() ? vacuum_ : stack_.back();
      const int m = k[prefix_.size()];
      GradeVector next;
      if (prev.grade < 0 || prev.is_zero() || prev.grade + m < 0) {
        next = alg_->zero(-1);
      } else {
        next = alg_->w(m, prev);
      }
      prefix_.push_back(m);
      stack_.push_back(std::move(next));
    }
    return stack_.empty() ? vacuum_ : stack_.back();
  }

  mpq_class amplitude(const std::vector<int>& k) {
    long total = 0;
    for (int x : k) total += x;
    if (total != 0) return 0;
    const GradeVector& v = state(k);
    if (v.grade != 0 || v.is_zero()) return 0;
    require(v.shift % 2 == 0, "vacuum amplitude acquired a surd");
    mpq_class r(v.num[0], v.den);
    r.canonicalize();
    return r;
  }

  const ModeAlgebra& algebra() const { return *alg_; }

 private:
  const ModeAlgebra* alg_;
  GradeVector vacuum_ = ModeAlgebra::for_q(alg_->q()).vacuum();
  std::vector<int> prefix_;
  std::vector<GradeVector> stack_;
};

// W indices k_j = lambda_j - q(j-1) - b_j for arbitrary integer tuples.
inline std::vector<int> w_indices(const std::vector<int>& lambda, const std::vector<int>& b, int q) {
  require(lambda.size() == b.size(), "lambda and b must have equal length");
  std::vector<int> k(lambda.size());
  for (std::size_t j = 0; j < lambda.size(); ++j) k[j] = lambda[j] - q * static_cast<int>(j) - b[j];
  return k;
}

namespace detail {

struct AmplitudeMemo {
  std::mutex mu;
  std::map<std::tuple<int, std::vector<int>, std::vector<int>>, mpq_class> table;
  static AmplitudeMemo& instance() {
    static AmplitudeMemo m;
    return m;
  }
};

inline AmplitudeEvaluator& thread_evaluator(int q) {
  thread_local std::map<int, std::unique_ptr<AmplitudeEvaluator>> evals;
  auto& slot = evals[q];
  if (!slot) slot = std::make_unique<AmplitudeEvaluator>(q);
  return *slot;
}

}  // namespace detail

// <0| W_{lambda_N - q(N-1) - b_N} ... W_{lambda_1 - b_1} |0>
inline mpq_class vacuum_amplitude(const std::vector<int>& lambda, const std::vector<int>& b, int q) {
  auto& memo = detail::AmplitudeMemo::instance();
  auto key = std::make_tuple(q, lambda, b);
  {
    std::lock_guard lock(memo.mu);
    if (auto it = memo.table.find(key); it != memo.table.end()) return it->second;
  }
  mpq_class r = detail::thread_evaluator(q).amplitude(w_indices(lambda, b, q));
  std::lock_guard lock(memo.mu);
  memo.table.emplace(std::move(key), r);
  return r;
}

inline mpq_class vacuum_amplitude(const Partition& lambda, const Partition& b, int q) {
  return vacuum_amplitude(lambda.parts(), b.parts(), q);
}

enum class Route { permutation_sum, boundary_charge };

inline mpq_class w_coefficient(const Partition& lambda, const Root& root, Route route = Route::permutation_sum) {
  require(lambda.length() == root.n && dominates(root_partition(root), lambda),
          "w_coefficient: " + lambda.str() + " is not dominated by the root partition");
  if (route == Route::permutation_sum) {
    // Each distinct rearrangement of b occurs M(b)! times among the permutations.
    std::vector<int> b = root.b.parts();
    mpq_class total = 0;
    do {
      total += vacuum_amplitude(lambda.parts(), b, root.q);
    } while (std::next_permutation(b.begin(), b.end()));
    return total;
  }
  const ModeAlgebra& alg = ModeAlgebra::for_q(root.q);
  AmplitudeEvaluator& ev = detail::thread_evaluator(root.q);
  const GradeVector v = ev.state(w_indices(lambda.parts(), std::vector<int>(lambda.parts().size(), 0), root.q));
  const FockVector wv = alg.to_fock(v);
  FockVector out;
  for (const auto& [mu, c] : transition_polynomial(root.b).coeffs)
    out.add(ModeState::from_modes(mu.parts()), Scalar::sqrt_q_pow(root.q, -mu.length()) * c);
  const Scalar r = inner_product(out, wv);
  require(r.is_rational(), "boundary-charge amplitude acquired a surd");
  return r.rat();
}

// ---- algebra identities ------------------------------------------------------------------

struct AlgebraReport {
  int q = 0;
  int m_max = 0;
  long checks = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

inline AlgebraReport verify_algebra(int q, int m_max, int lo, int hi) {
  const ModeAlgebra& alg = ModeAlgebra::for_q(q);
  AlgebraReport rep;
  rep.q = q;
  rep.m_max = m_max;
  auto check = [&](bool ok, const std::string& what) {
    ++rep.checks;
    if (!ok && rep.violations.size() < 100) rep.violations.push_back(what);
  };
  const mpz_class sign_q = (q % 2) ? -1 : 1;
  for (int grade = 0; grade <= m_max; ++grade) {
    const auto& gr = GradeTables::instance().grade(grade);
    for (std::size_t s = 0; s < gr.states.size(); ++s) {
      const GradeVector e = alg.basis_vector(grade, static_cast<int>(s));
      const std::string tag = " on state " + std::to_string(s) + " of H(" + std::to_string(grade) + ")";
      const int n_max = grade + hi;

      std::map<int, GradeVector> dp, dm, wj;
      for (int j = lo - q; j <= hi + q; ++j) {
        dp[j] = alg.d_plus(j, e);
        dm[j] = alg.d_minus(j, e);
        wj[j] = alg.w(j, e);
      }
      // D^+_m D^-_k = sum_l (-1)^l C(q,l) D^-_{k-l} D^+_{m-l}
      for (int m = lo; m <= hi; ++m)
        for (int k = lo; k <= hi; ++k) {
          GradeVector lhs = alg.d_plus(m, dm[k]);
          GradeVector rhs = alg.zero(-1);
          for (int l = 0; l <= q; ++l) {
            mpq_class c(binomial(q, l));
            if (l % 2) c = -c;
            rhs = alg.add(rhs, alg.scaled(alg.d_minus(k - l, dp[m - l]), c));
          }
          check(alg.equal(lhs, rhs), "D+_" + std::to_string(m) + " D-_" + std::to_string(k) + tag);
        }
      // a_n D^-_l = D^-_l a_n + sqrt(q) D^-_{l-n}
      for (int l = lo; l <= hi; ++l)
        for (int n = 1; n <= std::max(1, n_max); ++n) {
          GradeVector lhs = alg.annihilate(n, dm[l]);
          GradeVector rhs = alg.add(alg.d_minus(l, alg.annihilate(n, e)), alg.times_sqrt_q(alg.d_minus(l - n, e)));
          check(alg.equal(lhs, rhs), "a_" + std::to_string(n) + " D-_" + std::to_string(l) + tag);
        }
      // W_m W_k = (-1)^q W_{k-q} W_{m+q}
      for (int m = lo; m <= hi; ++m)
        for (int k = lo; k <= hi; ++k) {
          GradeVector lhs = alg.w(m, wj[k]);
          GradeVector rhs = alg.scaled(alg.w(k - q, wj[m + q]), mpq_class(sign_q));
          check(alg.equal(lhs, rhs), "W_" + std::to_string(m) + " W_" + std::to_string(k) + tag);
        }
      // a_n W_m = W_m a_n + sqrt(q) W_{m-n}
      for (int m = lo; m <= hi; ++m)
        for (int n = 1; n <= std::max(1, n_max); ++n) {
          GradeVector lhs = alg.annihilate(n, wj[m]);
          const GradeVector wmn = (m - n >= lo - q) ? wj[m - n] : alg.w(m - n, e);
          GradeVector rhs = alg.add(alg.w(m, alg.annihilate(n, e)), alg.times_sqrt_q(wmn));
          check(alg.equal(lhs, rhs), "a_" + std::to_string(n) + " W_" + std::to_string(m) + tag);
        }
    }
  }
  return rep;
}

// Largest singular value of e^{-(4q+1)L0/2} W_m e^{-(4q+1)L0/2} restricted to grades M <= m_max,
// in the orthonormal occupation basis.
inline double weighted_norm(int m, int q, int m_max) {
  const ModeAlgebra& alg = ModeAlgebra::for_q(q);
  double best = 0.0;
  const double rate = 4.0 * q + 1.0;
  for (int grade = 0; grade <= m_max; ++grade) {
    const int t = grade + m;
    if (t < 0) continue;
    Eigen::MatrixXd a = alg.w_block(m, grade);
    const auto& src = GradeTables::instance().grade(grade);
    const auto& dst = GradeTables::instance().grade(t);
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      for (Eigen::Index c = 0; c < a.cols(); ++c)
        a(r, c) *= std::sqrt(dst.norm[static_cast<std::size_t>(r)].get_d() / src.norm[static_cast<std::size_t>(c)].get_d());
    a *= std::exp(-rate * (t + grade) / 2.0);
    if (a.size() == 0) continue;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    best = std::max(best, svd.singularValues()(0));
  }
  return best;
}

}  // namespace fqh
