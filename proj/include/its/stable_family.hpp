#pragma once

// Densities of the one-sided beta-stable subordinator D(t) with Laplace
// transform exp(-t s^beta), its exponentially tempered version, and of the
// inverse stable subordinator E(t) = inf{u > 0 : D(u) > t}.

#include <complex>
#include <cstddef>

#include "its/density_result.hpp"
#include "its/quadrature.hpp"

namespace its {

struct TemperedStableParams {
  double beta = 0.5;
  double lambda = 0.0;

  /// Throws DomainError unless 0 < beta < 1 and lambda >= 0.
  void validate() const;

  /// Psi(s) = (s + lambda)^beta - lambda^beta.
  double laplace_symbol(double s) const;
  std::complex<double> laplace_symbol(std::complex<double> s) const;
};

struct StableSeriesConfig {
  std::size_t max_terms = 500;
  double term_tol = 1e-14;
  /// Consecutive terms must start decreasing before this many terms.
  std::size_t decay_deadline = 200;
  /// Below this value of x t^{-1/beta} the stable series is not attempted.
  double min_scaled_x = 0.1;
};

/// Alternating series for f(x,t). converged=false when the terms never enter
/// monotone decay, when max_terms is exhausted, or when rounding in the
/// alternating sum exceeds the truncation tolerance.
DensityResult stable_density_series(double x, double t, double beta, const StableSeriesConfig& cfg = {});

DensityResult stable_density_integral(double x, double t, double beta, const QuadratureSpec& spec = {});

/// Non-oscillatory form over u in (0, pi) built on Kanter's function
/// A(u) = sin(bu)^{b/(1-b)} sin((1-b)u) / sin(u)^{1/(1-b)}:
///   f(x,1) = b/((1-b) pi x) int (A z) e^{-A z} du,  z = x^{-b/(1-b)}.
/// Positive integrand, accurate in the left tail where the oscillatory form cancels.
DensityResult stable_density_kanter(double x, double t, double beta, const QuadratureSpec& spec = {});

/// Series where it is reliable, otherwise the Kanter form.
DensityResult stable_density(double x, double t, double beta, const StableSeriesConfig& cfg = {},
                             const QuadratureSpec& spec = {});

/// exp(-lambda x + lambda^beta t) f(x,t).
DensityResult tempered_density(double x, double t, const TemperedStableParams& params,
                               const StableSeriesConfig& cfg = {}, const QuadratureSpec& spec = {});

DensityResult inverse_stable_density_series(double x, double t, double beta, const StableSeriesConfig& cfg = {});
DensityResult inverse_stable_density_integral(double x, double t, double beta, const QuadratureSpec& spec = {});

/// Density of E(t) at x. x = 0 gives t^{-beta}/Gamma(1-beta); x < 0 gives 0.
DensityResult inverse_stable_density(double x, double t, double beta, const StableSeriesConfig& cfg = {},
                                     const QuadratureSpec& spec = {});

} // namespace its
