#pragma once

#include <cstddef>
#include <span>

#include "its/simd/dispatch.hpp"

namespace its::simd {

// Integrand family shared by every integral representation in the library:
//
//   f(y) = exp(log_scale - a*y - b*w) * [(p0 + p1*w) sin(c*w) + (q0 + q1*w) cos(c*w)]
//          / (dy*y + d0),        w = y^beta.
struct DampedOscillatory {
  double log_scale = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double beta = 1.0;
  double p0 = 0.0;
  double p1 = 0.0;
  double q0 = 0.0;
  double q1 = 0.0;
  double d0 = 1.0;
  double dy = 0.0;
};

struct KernelTable {
  void (*damped_oscillatory)(const DampedOscillatory& k, const double* y, double* out, std::size_t n);
  // One-sided stable variates from U ~ Unif(0, pi) and W ~ Exp(1):
  //   out = exp(log_scale) * (A(U)/W)^{(1-beta)/beta}.
  void (*kanter_stable)(double beta, double log_scale, const double* u, const double* w, double* out,
                        std::size_t n);
  void (*exp)(const double* x, double* out, std::size_t n);
  void (*log)(const double* x, double* out, std::size_t n);
  void (*sin)(const double* x, double* out, std::size_t n);
  void (*cos)(const double* x, double* out, std::size_t n);
};

const KernelTable& kernels();
const KernelTable& kernels(Backend backend);

inline void damped_oscillatory(const DampedOscillatory& k, std::span<const double> y, std::span<double> out) {
  kernels().damped_oscillatory(k, y.data(), out.data(), y.size());
}

} // namespace its::simd
