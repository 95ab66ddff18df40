#pragma once

#include <cmath>
#include <ostream>
#include <string>

#include <gmpxx.h>

#include "fqh/errors.hpp"

namespace fqh {

inline std::string rational_str(const mpq_class& x) {
  mpq_class y = x;
  y.canonicalize();
  return y.get_num().get_str() + "/" + y.get_den().get_str();
}

inline mpq_class parse_rational(const std::string& s) {
  mpq_class x(s, 10);
  x.canonicalize();
  return x;
}

// a + b*sqrt(q) with exact rationals. q == 0 marks a context-free value whose surd part is
// zero; it adopts the context of whatever it is combined with.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : rat_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(mpq_class rat) : rat_(std::move(rat)) {}  // NOLINT(google-explicit-constructor)
  Scalar(mpq_class rat, mpq_class surd, int q) : rat_(std::move(rat)), surd_(std::move(surd)), q_(q) {
    require(q_ >= 1 || sgn(surd_) == 0, "surd component needs a q context");
  }

  static Scalar sqrt_q(int q) { return Scalar(0, 1, q); }
  // sqrt(q)^k
  static Scalar sqrt_q_pow(int q, int k) {
    mpq_class base = 1;
    int half = k / 2;
    mpq_class qq = q;
    if (k >= 0) {
      for (int i = 0; i < half; ++i) base *= qq;
      return (k % 2) ? Scalar(0, base, q) : Scalar(base, 0, q);
    }
    for (int i = 0; i < (-k) / 2; ++i) base /= qq;
    // sqrt(q)^{-1} = sqrt(q) / q
    return (k % 2) ? Scalar(0, base / qq, q) : Scalar(base, 0, q);
  }

  const mpq_class& rat() const { return rat_; }
  const mpq_class& surd() const { return surd_; }
  int q() const { return q_; }
  bool is_zero() const { return sgn(rat_) == 0 && sgn(surd_) == 0; }
  bool is_rational() const { return sgn(surd_) == 0; }

  double to_double() const {
    double v = rat_.get_d();
    if (sgn(surd_) != 0) v += surd_.get_d() * std::sqrt(static_cast<double>(q_));
    return v;
  }

  Scalar& operator+=(const Scalar& o) {
    q_ = join(o);
    rat_ += o.rat_;
    surd_ += o.surd_;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    q_ = join(o);
    rat_ -= o.rat_;
    surd_ -= o.surd_;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    const int q = join(o);
    mpq_class r = rat_ * o.rat_;
    mpq_class s = rat_ * o.surd_ + surd_ * o.rat_;
    if (sgn(surd_) != 0 && sgn(o.surd_) != 0) r += surd_ * o.surd_ * q;
    rat_ = std::move(r);
    surd_ = std::move(s);
    q_ = q;
    return *this;
  }
  Scalar& operator*=(const mpq_class& c) {
    rat_ *= c;
    surd_ *= c;
    return *this;
  }
  Scalar& operator/=(const mpq_class& c) {
    require(sgn(c) != 0, "division by zero");
    rat_ /= c;
    surd_ /= c;
    return *this;
  }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator*(Scalar a, const mpq_class& c) { return a *= c; }
  friend Scalar operator*(const mpq_class& c, Scalar a) { return a *= c; }
  friend Scalar operator/(Scalar a, const mpq_class& c) { return a /= c; }
  friend Scalar operator-(Scalar a) {
    a.rat_ = -a.rat_;
    a.surd_ = -a.surd_;
    return a;
  }

  // Component equality; the q context only matters when a surd is present.
  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (a.rat_ != b.rat_ || a.surd_ != b.surd_) return false;
    return sgn(a.surd_) == 0 || a.q_ == b.q_;
  }

  std::string str() const {
    if (sgn(surd_) == 0) return rational_str(rat_);
    return rational_str(rat_) + " + " + rational_str(surd_) + "*sqrt(" + std::to_string(q_) + ")";
  }
  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

 private:
  int join(const Scalar& o) const {
    if (q_ == 0) return o.q_;
    if (o.q_ == 0 || o.q_ == q_) return q_;
    throw PreconditionError("mixing scalars over sqrt(" + std::to_string(q_) + ") and sqrt(" +
                            std::to_string(o.q_) + ")");
  }

  mpq_class rat_ = 0;
  mpq_class surd_ = 0;
  int q_ = 0;
};

}  // namespace fqh
