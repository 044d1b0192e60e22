#pragma once

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>

#include "errors.hpp"

namespace holobias {

// J0 with the range guard of the operation contract. J0(-x) = J0(x).
inline double bessel_j0(double x) {
    x = std::abs(x);
    if (x > 1e8) throw numeric_guard_error("bessel_j0: |x| exceeds range guard 1e8");
    return boost::math::cyl_bessel_j(0, x);
}

// k-th positive zero of J0 (k >= 1).
inline double bessel_j0_zero(unsigned k) {
    return boost::math::cyl_bessel_j_zero(0.0, static_cast<int>(k));
}

} // namespace holobias
