#include "its/special_fn.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "its/errors.hpp"

namespace its::special_fn {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 100000;

bool is_non_positive_integer(double a) { return a <= 0.0 && a == std::floor(a); }

// Modified Lentz evaluation of the continued fraction
//   Gamma(a,u) = e^{-u} u^a / (u+1-a- 1(1-a)/(u+3-a- 2(2-a)/(u+5-a- ...)))
// Returns the scaled value directly.
double scaled_continued_fraction(double a, double u) {
  double b = u + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw NumericalFailure("incomplete gamma continued fraction did not converge");
}

// a >= 0.5, u < a + 1: Gamma(a) - gamma(a,u) with the positive series for gamma.
double scaled_by_lower_series(double a, double u) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= u / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  // gamma(a,u) u^{-a} e^{u} = sum
  const double complete = std::exp(boost::math::lgamma(a) + u - a * std::log(u));
  return complete - sum;
}

// |a| <= 0.5, 0 < u < 1. Avoids the 1/a - 1/a cancellation near a = 0 by
// working with (Gamma(1+a) - 1)/a and (u^a - 1)/a.
double base_near_zero(double a, double u) {
  const double log_u = std::log(u);
  double head;
  if (a == 0.0) {
    head = -std::numbers::egamma_v<double> - log_u;
  } else {
    head = boost::math::tgamma1pm1(a) / a - std::expm1(a * log_u) / a;
  }
  // tail = sum_{k>=1} (-u)^k / (k! (a+k))
  double power = 1.0;
  double tail = 0.0;
  for (int k = 1; k < 200; ++k) {
    power *= -u / k;
    const double term = power / (a + k);
    tail += term;
    if (std::fabs(term) < kEps * std::fabs(tail)) break;
  }
  const double ua = std::exp(a * log_u);
  const double value = head - ua * tail;
  return value * std::exp(u - a * log_u);
}

void check_domain(double a, double u) {
  if (!(u > 0.0) || !std::isfinite(u) || !std::isfinite(a)) {
    throw DomainError("upper incomplete gamma requires u > 0, got u = " + std::to_string(u));
  }
  if (a <= 0.0 && u < kMinLowerLimit) {
    throw DomainError("upper incomplete gamma with a <= 0 refuses u < 1e-8; use the small-u form");
  }
}

} // namespace

double gamma(double a) {
  if (is_non_positive_integer(a)) throw PoleError("gamma: pole at " + std::to_string(a));
  return std::tgamma(a);
}

double log_abs_gamma(double a) {
  if (is_non_positive_integer(a)) throw PoleError("log gamma: pole at " + std::to_string(a));
  return boost::math::lgamma(a);
}

double scaled_upper_incomplete_gamma(double a, double u) {
  check_domain(a, u);
  if (u >= 1.0 && u >= a + 1.0) return scaled_continued_fraction(a, u);
  if (a >= 0.5) return scaled_by_lower_series(a, u);

  // u < 1 and a < 0.5: start from a0 in [-0.5, 0.5] and recur downward.
  const double shift = std::round(a);
  const double a0 = a - shift;
  double s = base_near_zero(a0, u);
  double b = a0;
  const int steps = static_cast<int>(-shift);
  for (int i = 0; i < steps; ++i) {
    s = (u * s - 1.0) / (b - 1.0);
    b -= 1.0;
  }
  return s;
}

double upper_incomplete_gamma(double a, double u) {
  const double s = scaled_upper_incomplete_gamma(a, u);
  return s * std::exp(a * std::log(u) - u);
}

double upper_incomplete_gamma_small_u(double a, double u) {
  if (!(a < 0.0) || is_non_positive_integer(a)) {
    throw DomainError("small-u incomplete gamma form needs negative non-integer order");
  }
  if (!(u > 0.0)) throw DomainError("small-u incomplete gamma form needs u > 0");
  return std::tgamma(a) - std::pow(u, a) / a;
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0)) throw DomainError("regularized gamma Q needs a > 0");
  if (x < 0.0) throw DomainError("regularized gamma Q needs x >= 0");
  if (x == 0.0) return 1.0;
  const double s = scaled_upper_incomplete_gamma(a, x);
  return s * std::exp(a * std::log(x) - x - boost::math::lgamma(a));
}

double weighted_exp_integral(double p, double q, double t) {
  if (!(p > -1.0)) throw DomainError("weighted_exp_integral needs p > -1");
  if (!(q > 0.0)) throw DomainError("weighted_exp_integral needs q > 0");
  if (!(t > 0.0)) throw DomainError("weighted_exp_integral needs t > 0");
  // Gamma(p+1) q^p e^{qt} Gamma(-p, qt) = Gamma(p+1) t^{-p} S(-p, qt)
  return std::tgamma(p + 1.0) * std::pow(t, -p) * scaled_upper_incomplete_gamma(-p, q * t);
}

} // namespace its::special_fn
