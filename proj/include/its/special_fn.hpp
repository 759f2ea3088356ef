#pragma once

// Gamma-family special functions on the real line.
//
// The upper incomplete gamma function is needed at negative, non-integer
// order. Internally everything is computed through the scaled quantity
//
//     S(a, u) = Gamma(a, u) * u^{-a} * e^{u}
//
// which stays O(1) for the whole supported range and makes the downward
// recurrence in a free of overflow:  S(a - 1, u) = (u S(a, u) - 1) / (a - 1).

namespace its::special_fn {

/// Smallest lower limit accepted for Gamma(a, u) with a <= 0.
inline constexpr double kMinLowerLimit = 1e-8;

/// Gamma(a). Throws PoleError at non-positive integers.
double gamma(double a);

/// ln|Gamma(a)|. Throws PoleError at non-positive integers.
double log_abs_gamma(double a);

/// Gamma(a, u) = \int_u^\infty y^{a-1} e^{-y} dy for any real a and u > 0.
/// Refuses u < kMinLowerLimit when a <= 0 (use upper_incomplete_gamma_small_u).
double upper_incomplete_gamma(double a, double u);

/// Gamma(a, u) u^{-a} e^{u}; same domain as upper_incomplete_gamma.
double scaled_upper_incomplete_gamma(double a, double u);

/// Two-term small-u form Gamma(a) - u^a / a for negative non-integer a.
/// Leading behaviour is Gamma(a, u) / u^a -> -1/a as u -> 0.
double upper_incomplete_gamma_small_u(double a, double u);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a), a > 0, x >= 0.
double regularized_gamma_q(double a, double x);

/// \int_0^\infty e^{-t y} y^p / (y + q) dy for p > -1, q > 0, t > 0,
/// evaluated as Gamma(p+1) q^p e^{q t} Gamma(-p, q t).
double weighted_exp_integral(double p, double q, double t);

} // namespace its::special_fn
