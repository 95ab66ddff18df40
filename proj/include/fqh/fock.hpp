#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"

#include "fqh/errors.hpp"
#include "fqh/partitions.hpp"
#include "fqh/scalar.hpp"

namespace fqh {

// Occupations n_j of the modes j >= 1; stored as occ[j-1] without trailing zeros.
class ModeState {
 public:
  ModeState() = default;
  explicit ModeState(const std::map<int, int>& occupations) {
    for (auto [j, n] : occupations) {
      require(j >= 1 && n >= 0, "mode index must be >= 1 and occupation >= 0");
      if (n == 0) continue;
      if (static_cast<int>(occ_.size()) < j) occ_.resize(static_cast<std::size_t>(j), 0);
      occ_[j - 1] = n;
    }
  }
  // From the multiset of occupied modes, e.g. {2,1,1} for a_2* a_1*^2 |0>.
  static ModeState from_modes(const std::vector<int>& modes) {
    ModeState s;
    for (int j : modes) s = s.raised(j);
    return s;
  }

  int count(int j) const { return j >= 1 && j <= static_cast<int>(occ_.size()) ? occ_[j - 1] : 0; }
  int max_mode() const { return static_cast<int>(occ_.size()); }
  bool is_vacuum() const { return occ_.empty(); }
  const std::vector<int>& occupations() const { return occ_; }

  long momentum() const {
    long m = 0;
    for (std::size_t i = 0; i < occ_.size(); ++i) m += static_cast<long>(i + 1) * occ_[i];
    return m;
  }
  int mode_count() const {
    int c = 0;
    for (int n : occ_) c += n;
    return c;
  }
  // <s|s> = prod_j j^{n_j} n_j!
  mpz_class norm_squared() const {
    mpz_class r = 1;
    for (std::size_t i = 0; i < occ_.size(); ++i) {
      mpz_class p;
      mpz_ui_pow_ui(p.get_mpz_t(), i + 1, static_cast<unsigned long>(occ_[i]));
      r *= p * factorial(occ_[i]);
    }
    return r;
  }

  ModeState raised(int j) const {
    ModeState s = *this;
    if (static_cast<int>(s.occ_.size()) < j) s.occ_.resize(static_cast<std::size_t>(j), 0);
    ++s.occ_[j - 1];
    return s;
  }
  ModeState lowered(int j) const {
    ModeState s = *this;
    --s.occ_[j - 1];
    while (!s.occ_.empty() && s.occ_.back() == 0) s.occ_.pop_back();
    return s;
  }

  std::map<int, int> as_map() const {
    std::map<int, int> m;
    for (std::size_t i = 0; i < occ_.size(); ++i)
      if (occ_[i]) m[static_cast<int>(i + 1)] = occ_[i];
    return m;
  }

  friend auto operator<=>(const ModeState&, const ModeState&) = default;
  friend bool operator==(const ModeState&, const ModeState&) = default;

 private:
  std::vector<int> occ_;
};

struct ModeStateHash {
  std::size_t operator()(const ModeState& s) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (int v : s.occupations()) h = (h ^ static_cast<std::size_t>(v + 1)) * 0x100000001b3ULL;
    return h;
  }
};

class FockVector {
 public:
  using Map = std::map<ModeState, Scalar>;

  FockVector() = default;
  static FockVector vacuum() { return basis(ModeState{}); }
  static FockVector basis(const ModeState& s, Scalar c = Scalar(1)) {
    FockVector v;
    v.add(s, c);
    return v;
  }

  void add(const ModeState& s, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(s, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  Scalar coefficient(const ModeState& s) const {
    auto it = terms_.find(s);
    return it == terms_.end() ? Scalar() : it->second;
  }
  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  std::set<long> momentum_support() const {
    std::set<long> m;
    for (const auto& [s, c] : terms_) m.insert(s.momentum());
    return m;
  }

  FockVector& operator+=(const FockVector& o) {
    for (const auto& [s, c] : o.terms_) add(s, c);
    return *this;
  }
  FockVector& operator-=(const FockVector& o) {
    for (const auto& [s, c] : o.terms_) add(s, -c);
    return *this;
  }
  FockVector& operator*=(const Scalar& c) {
    if (c.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second *= c;
      it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
    }
    return *this;
  }
  friend FockVector operator+(FockVector a, const FockVector& b) { return a += b; }
  friend FockVector operator-(FockVector a, const FockVector& b) { return a -= b; }
  friend FockVector operator*(const Scalar& c, FockVector v) { return v *= c; }
  friend bool operator==(const FockVector& a, const FockVector& b) { return a.terms_ == b.terms_; }

 private:
  Map terms_;
};

inline FockVector apply_creation(int n, const FockVector& v) {
  require(n >= 1, "mode index must be >= 1");
  FockVector out;
  for (const auto& [s, c] : v.terms()) out.add(s.raised(n), c);
  return out;
}

// a_n |... n_n ...> = n * n_n |... n_n - 1 ...>
inline FockVector apply_annihilation(int n, const FockVector& v) {
  require(n >= 1, "mode index must be >= 1");
  FockVector out;
  for (const auto& [s, c] : v.terms()) {
    const int k = s.count(n);
    if (k == 0) continue;
    out.add(s.lowered(n), c * mpq_class(static_cast<long>(n) * k));
  }
  return out;
}

inline long momentum(const ModeState& s) { return s.momentum(); }

inline FockVector apply_L0(const FockVector& v) {
  FockVector out;
  for (const auto& [s, c] : v.terms()) out.add(s, c * mpq_class(s.momentum()));
  return out;
}

// Coefficients are real, so no conjugation is needed.
inline Scalar inner_product(const FockVector& u, const FockVector& v) {
  Scalar r;
  const auto& small = u.size() <= v.size() ? u : v;
  const auto& large = u.size() <= v.size() ? v : u;
  for (const auto& [s, c] : small.terms()) {
    auto it = large.terms().find(s);
    if (it == large.terms().end()) continue;
    r += c * it->second * mpq_class(s.norm_squared());
  }
  return r;
}

inline std::vector<ModeState> basis_of_momentum(int m) {
  std::vector<ModeState> out;
  if (m < 0) return out;
  for (const Partition& p : partitions_of(m)) out.push_back(ModeState::from_modes(p.parts()));
  return out;
}

inline nlohmann::json to_json(const FockVector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [s, c] : v.terms()) {
    nlohmann::json st = nlohmann::json::object();
    for (auto [j, n] : s.as_map()) st[std::to_string(j)] = n;
    arr.push_back({{"state", st}, {"rat", rational_str(c.rat())}, {"surd", rational_str(c.surd())}});
  }
  return arr;
}

inline FockVector fock_vector_from_json(const nlohmann::json& arr, int q) {
  FockVector v;
  for (const auto& t : arr) {
    std::map<int, int> occ;
    for (const auto& [k, n] : t.at("state").items()) occ[std::stoi(k)] = n.get<int>();
    v.add(ModeState(occ),
          Scalar(parse_rational(t.at("rat").get<std::string>()), parse_rational(t.at("surd").get<std::string>()), q));
  }
  return v;
}

// Shared, lazily built index tables over the graded basis. Independent of q.
class GradeTables {
 public:
  struct Grade {
    int momentum = 0;
    std::vector<ModeState> states;
    std::unordered_map<ModeState, int, ModeStateHash> index;
    std::vector<int> modes;
    std::vector<mpz_class> norm;  // <s|s>
  };
  // A sub-multiset u of a state s: s - u lands at `target` in grade |s| - ell.
  struct Removal {
    int ell;
    int target;
    int modes;
    std::int64_t binom;  // prod_j C(s_j, u_j)
  };

  static GradeTables& instance() {
    static GradeTables t;
    return t;
  }

  const Grade& grade(int m) {
    std::lock_guard lock(mu_);
    return grade_locked(m);
  }

  // Index in grade g + k of (state t of grade g) united with (state u of grade k), row-major in t.
  const std::vector<int>& union_table(int g, int k) {
    std::lock_guard lock(mu_);
    auto& slot = unions_[{g, k}];
    if (!slot) {
      const Grade& a = grade_locked(g);
      const Grade& b = grade_locked(k);
      const Grade& c = grade_locked(g + k);
      auto tab = std::make_unique<std::vector<int>>(a.states.size() * b.states.size());
      for (std::size_t i = 0; i < a.states.size(); ++i)
        for (std::size_t j = 0; j < b.states.size(); ++j) {
          std::vector<int> occ = a.states[i].occupations();
          const auto& o2 = b.states[j].occupations();
          if (occ.size() < o2.size()) occ.resize(o2.size(), 0);
          for (std::size_t x = 0; x < o2.size(); ++x) occ[x] += o2[x];
          std::map<int, int> m;
          for (std::size_t x = 0; x < occ.size(); ++x) m[static_cast<int>(x + 1)] = occ[x];
          (*tab)[i * b.states.size() + j] = c.index.at(ModeState(m));
        }
      slot = std::move(tab);
    }
    return *slot;
  }

  const std::vector<std::vector<Removal>>& removals(int g) {
    std::lock_guard lock(mu_);
    auto& slot = removals_[g];
    if (!slot) {
      const Grade& gr = grade_locked(g);
      auto tab = std::make_unique<std::vector<std::vector<Removal>>>(gr.states.size());
      for (std::size_t i = 0; i < gr.states.size(); ++i) {
        const auto& occ = gr.states[i].occupations();
        std::vector<int> u(occ.size(), 0);
        while (true) {
          int ell = 0, modes = 0;
          std::int64_t binom = 1;
          std::map<int, int> rest;
          for (std::size_t x = 0; x < occ.size(); ++x) {
            ell += static_cast<int>(x + 1) * u[x];
            modes += u[x];
            binom *= binomial(occ[x], u[x]).get_si();
            rest[static_cast<int>(x + 1)] = occ[x] - u[x];
          }
          const Grade& tg = grade_locked(g - ell);
          (*tab)[i].push_back({ell, tg.index.at(ModeState(rest)), modes, binom});
          std::size_t x = 0;
          while (x < u.size() && u[x] == occ[x]) u[x++] = 0;
          if (x == u.size()) break;
          ++u[x];
        }
      }
      slot = std::move(tab);
    }
    return *slot;
  }

 private:
  GradeTables() = default;

  const Grade& grade_locked(int m) {
    auto& slot = grades_[m];
    if (!slot) {
      auto g = std::make_unique<Grade>();
      g->momentum = m;
      g->states = basis_of_momentum(m);
      for (std::size_t i = 0; i < g->states.size(); ++i) {
        g->index.emplace(g->states[i], static_cast<int>(i));
        g->modes.push_back(g->states[i].mode_count());
        g->norm.push_back(g->states[i].norm_squared());
      }
      slot = std::move(g);
    }
    return *slot;
  }

  std::mutex mu_;
  std::map<int, std::unique_ptr<Grade>> grades_;
  std::map<std::pair<int, int>, std::unique_ptr<std::vector<int>>> unions_;
  std::map<int, std::unique_ptr<std::vector<std::vector<Removal>>>> removals_;
};

}  // namespace fqh
