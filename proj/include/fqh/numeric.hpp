#pragma once

#include <cmath>
#include <string>
#include <type_traits>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gmpxx.h>

namespace fqh {

// Extended precision for quantities whose interesting part sits far below 1e-16 relative to
// an O(1) background (thin-cylinder norms, connected correlators, renewal residuals).
using Precise = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<400>,
                                              boost::multiprecision::et_off>;

template <class Real>
Real to_real(const mpz_class& x) {
  if constexpr (std::is_same_v<Real, double>) {
    return x.get_d();
  } else {
    return Real(x.get_str());
  }
}

template <class Real>
Real to_real(const mpq_class& x) {
  if constexpr (std::is_same_v<Real, mpq_class>) {
    return x;
  } else if constexpr (std::is_same_v<Real, double>) {
    return x.get_d();
  } else {
    return Real(x.get_num().get_str()) / Real(x.get_den().get_str());
  }
}

template <class Real>
double to_double(const Real& x) {
  if constexpr (std::is_same_v<Real, double>) {
    return x;
  } else if constexpr (std::is_same_v<Real, mpq_class>) {
    return x.get_d();
  } else {
    return static_cast<double>(x);
  }
}

template <class Real>
Real real_pi() {
  if constexpr (std::is_same_v<Real, double>) {
    return M_PI;
  } else {
    return boost::math::constants::pi<Real>();
  }
}

}  // namespace fqh
