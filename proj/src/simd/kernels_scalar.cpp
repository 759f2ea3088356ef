#include <cmath>

#include "simd/tables.hpp"

namespace its::simd::detail {
namespace {

void damped_oscillatory(const DampedOscillatory& k, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double yi = y[i];
    const double w = yi == 0.0 ? 0.0 : std::exp(k.beta * std::log(yi));
    const double phase = k.c * w;
    const double env = std::exp(k.log_scale - k.a * yi - k.b * w);
    const double osc = (k.p0 + k.p1 * w) * std::sin(phase) + (k.q0 + k.q1 * w) * std::cos(phase);
    out[i] = env * osc / (k.dy * yi + k.d0);
  }
}

void kanter_stable(double beta, double log_scale, const double* u, const double* w, double* out,
                   std::size_t n) {
  const double r = 1.0 - beta;
  for (std::size_t i = 0; i < n; ++i) {
    const double log_a = (beta / r) * std::log(std::sin(beta * u[i])) + std::log(std::sin(r * u[i])) -
                         std::log(std::sin(u[i])) / r;
    out[i] = std::exp(log_scale + (r / beta) * (log_a - std::log(w[i])));
  }
}

void exp_n(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}
void log_n(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::log(x[i]);
}
void sin_n(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::sin(x[i]);
}
void cos_n(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::cos(x[i]);
}

} // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{damped_oscillatory, kanter_stable, exp_n, log_n, sin_n, cos_n};
  return table;
}

} // namespace its::simd::detail
