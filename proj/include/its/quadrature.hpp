#pragma once

// Adaptive Gauss-Kronrod (G10/K21) quadrature on finite and semi-infinite
// intervals. Integrands are evaluated in batches so the vectorised kernels in
// its/simd can fill whole registers.

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace its {

struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-9;
  std::size_t max_subdivisions = 2000;
  /// Panels whose integrand magnitude stays below this fraction of the peak
  /// magnitude seen so far terminate the semi-infinite sweep.
  double truncation_threshold = 1e-16;

  /// Throws ConfigError on non-positive tolerances or a zero panel budget.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t subdivisions_used = 0;
  bool converged = false;
};

/// Fills out[i] = f(y[i]).
using BatchIntegrand = std::function<void(std::span<const double> y, std::span<double> out)>;

/// Shape information that lets the semi-infinite driver place panels well.
struct SemiInfiniteHints {
  /// Width of the first panel; later panels double in width.
  double scale = 1.0;
  /// When set, the first panel [0, scale] is integrated in s with
  /// y = scale * s^{1/(1+endpoint_exponent)}, which removes an integrable
  /// y^{endpoint_exponent} singularity at 0.
  bool map_endpoint = false;
  double endpoint_exponent = 0.0;
  /// Oscillation phase osc_coefficient * y^{osc_power}. When the coefficient is
  /// non-zero, panels are split at the zeros of sin(phase) so that no panel
  /// carries more than half a period.
  double osc_coefficient = 0.0;
  double osc_power = 1.0;
};

QuadratureResult integrate_semi_infinite(const BatchIntegrand& f, const QuadratureSpec& spec,
                                         const SemiInfiniteHints& hints = {});

QuadratureResult integrate_interval(const BatchIntegrand& f, double a, double b,
                                    const QuadratureSpec& spec);

/// Wraps a scalar callable as a BatchIntegrand.
template <class F>
BatchIntegrand batch(F f) {
  return [f = std::move(f)](std::span<const double> y, std::span<double> out) {
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = f(y[i]);
  };
}

} // namespace its
