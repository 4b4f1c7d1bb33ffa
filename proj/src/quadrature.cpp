#include "kforest/quadrature.hpp"

#include <algorithm>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace kforest {

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol) {
  // Boost's error estimate has a floor near 1e-14 relative; asking for less
  // makes every panel split down to max depth.
  rel_tol = std::max(rel_tol, kMinRelTol);
  QuadratureResult out;
  double l1 = 0.0;
  out.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, a, b, 15, rel_tol, &out.error_estimate, &l1);
  return out;
}

}  // namespace kforest
