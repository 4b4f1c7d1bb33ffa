#pragma once

#include <functional>

namespace kforest {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

inline constexpr double kMinRelTol = 1e-13;

// Adaptive Gauss–Kronrod (61 points) on a finite interval. `rel_tol` is
// clamped to kMinRelTol.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = kMinRelTol);

}  // namespace kforest
