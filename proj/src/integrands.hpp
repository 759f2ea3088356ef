#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "its/quadrature.hpp"
#include "its/simd/kernels.hpp"

namespace its::detail {

inline BatchIntegrand kernel_integrand(const simd::DampedOscillatory& k) {
  return [k](std::span<const double> y, std::span<double> out) { simd::damped_oscillatory(k, y, out); };
}

// First panel ends at the first oscillation zero or at the damping scale 1/a,
// whichever comes first.
inline double first_panel_scale(double a, double c, double beta) {
  double scale = a > 0.0 ? 1.0 / a : 1.0;
  if (c != 0.0) scale = std::min(scale, std::pow(std::numbers::pi / std::fabs(c), 1.0 / beta));
  return scale;
}

} // namespace its::detail
