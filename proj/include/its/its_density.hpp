#pragma once

// Density h(x,t) of the inverse tempered stable subordinator
// E(t) = inf{u > 0 : D(u) > t}, where D has Laplace symbol
// (s + lambda)^beta - lambda^beta.

#include <cstddef>
#include <vector>

#include "its/density_result.hpp"
#include "its/quadrature.hpp"
#include "its/stable_family.hpp"

namespace its {

struct EvalPoint {
  double x = 0.0;
  double t = 1.0;
};

struct EvalConfig {
  QuadratureSpec quadrature{};
  std::size_t max_terms = 500;
  /// The dispatcher uses the series when x lambda^beta <= series_max_x_scale
  /// and lambda t >= series_min_lambda_t.
  double series_max_x_scale = 2.0;
  double series_min_lambda_t = 1e-6;
};

/// Oscillatory integral representation. Requires lambda > 0 (DomainError
/// otherwise); x < 0 gives 0.
DensityResult eval_integral(EvalPoint p, const TemperedStableParams& params, const QuadratureSpec& spec = {});

/// Power series in x with incomplete gamma coefficients. Requires lambda > 0.
/// The error estimate is the first omitted term plus the rounding error of the
/// alternating sum; converged is false when either exceeds
/// max(1e-9 |h|, 1e-13) or max_terms is reached.
DensityResult eval_series(EvalPoint p, const TemperedStableParams& params, std::size_t max_terms = 500);

/// h(x,t) = int_0^t g_x(s) nu(t-s) ds, with g_x the density of D(x) and nu the
/// Levy tail. Positive integrand, so it survives where the oscillatory form
/// cancels (large x); slower. Requires lambda > 0.
DensityResult eval_convolution(EvalPoint p, const TemperedStableParams& params, const QuadratureSpec& spec = {});

/// Chooses the representation; lambda = 0 routes to the inverse stable
/// density and x = 0 to boundary_value.
DensityResult eval(EvalPoint p, const TemperedStableParams& params, const EvalConfig& config = {});

/// eval at many x for one t; points are distributed over worker threads
/// (0 = hardware concurrency) and results keep the input order.
std::vector<DensityResult> eval_many(const std::vector<double>& xs, double t, const TemperedStableParams& params,
                                     const EvalConfig& config = {}, std::size_t threads = 0);

/// lim_{x -> 0+} h(x,t) = (sin(beta pi)/pi) lambda^beta Gamma(1+beta) Gamma(-beta, lambda t).
/// lambda = 0 gives t^{-beta}/Gamma(1-beta).
double boundary_value(double t, const TemperedStableParams& params);

/// Which way the phase k*alpha enters the second sine of the derivative
/// integrand. beta_pi_minus_k_alpha is the correct one; the other is kept so the
/// difference can be demonstrated.
enum class DerivativePhase { beta_pi_minus_k_alpha, k_alpha_minus_beta_pi };

/// k-th x-derivative of h at x = 0+, computed as
///   (e^{-lambda t}/pi) int e^{-ty}/(y+lambda) r^k [lambda^beta sin(k a) + y^beta sin(beta pi - k a)] dy
/// with r^2 = lambda^{2beta} + y^{2beta} - 2 lambda^beta y^beta cos(beta pi) and
/// a = atan2(y^beta sin(beta pi), lambda^beta - y^beta cos(beta pi)).
/// For lambda = 0 the call requires beta <= 1/2 and (k+1) beta <= 1.
DensityResult derivative_at_zero(int k, double t, const TemperedStableParams& params, const QuadratureSpec& spec = {},
                                 DerivativePhase phase = DerivativePhase::beta_pi_minus_k_alpha);

/// (-1)^k t^{-(k+1) beta} / Gamma(1 - (k+1) beta); zero at the poles of Gamma.
double derivative_at_zero_untempered(int k, double t, double beta);

/// P(E(t) <= x), clamped to [0, 1].
DensityResult cdf(double x, double t, const TemperedStableParams& params, const QuadratureSpec& spec = {});

/// Chernoff bound on P(E(t) > x) = P(D(x) < t).
double passage_tail_bound(double x, double t, const TemperedStableParams& params);

/// Smallest x of the form x0 * 2^n with passage_tail_bound(x, t) <= eps.
double passage_tail_cutoff(double t, const TemperedStableParams& params, double eps);

} // namespace its
