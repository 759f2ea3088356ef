#include "its/stable_family.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "integrands.hpp"
#include "its/errors.hpp"

namespace its {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Largest tolerated rounding error of an alternating sum, relative to its value.
constexpr double kRoundingTol = 1e-10;

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
}

void check_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t must be positive and finite");
}

// Sums sign_k * exp(log_env(k)) for k = first, first+1, ... stopping once the
// envelope is decreasing and below term_tol relative to the partial sum.
template <class Env, class Sign>
DensityResult alternating_sum(std::size_t first, Env log_env, Sign sign, const StableSeriesConfig& cfg) {
  DensityResult r;
  r.method = Method::series;
  double sum = 0.0;
  double abs_sum = 0.0;
  double prev_env = -std::numeric_limits<double>::infinity();
  bool decaying = false;
  std::size_t k = first;
  for (; k < first + cfg.max_terms; ++k) {
    const double env = log_env(k);
    if (k > first && env < prev_env) decaying = true;
    if (!decaying && k - first >= cfg.decay_deadline) break;
    const double mag = std::exp(env);
    const double term = sign(k) * mag;
    sum += term;
    abs_sum += std::fabs(term);
    prev_env = env;
    if (decaying && mag <= cfg.term_tol * std::max(std::fabs(sum), std::numeric_limits<double>::min())) {
      const double next = std::exp(log_env(k + 1));
      r.value = sum;
      r.error_estimate = next + 16.0 * kEps * abs_sum;
      r.terms_or_panels = k - first + 1;
      r.converged = std::isfinite(sum) && 16.0 * kEps * abs_sum <= kRoundingTol * std::fabs(sum);
      return r;
    }
  }
  r.value = sum;
  r.error_estimate = std::isfinite(abs_sum) ? abs_sum : std::numeric_limits<double>::infinity();
  r.terms_or_panels = k - first;
  r.converged = false;
  return r;
}

DensityResult scaled(DensityResult r, double factor) {
  r.value *= factor;
  r.error_estimate *= std::fabs(factor);
  return r;
}

DensityResult zero_density() {
  DensityResult r;
  r.method = Method::closed_form;
  r.converged = true;
  return r;
}

DensityResult from_quadrature(const QuadratureResult& q) {
  DensityResult r;
  r.value = q.value;
  r.error_estimate = q.error_estimate;
  r.method = Method::integral;
  r.terms_or_panels = q.subdivisions_used;
  r.converged = q.converged;
  return r;
}

} // namespace

void TemperedStableParams::validate() const {
  check_beta(beta);
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be non-negative and finite");
}

double TemperedStableParams::laplace_symbol(double s) const {
  if (lambda == 0.0) return std::pow(s, beta);
  // (s+l)^b - l^b = l^b expm1(b log1p(s/l)) keeps digits for small s.
  return std::pow(lambda, beta) * std::expm1(beta * std::log1p(s / lambda));
}

std::complex<double> TemperedStableParams::laplace_symbol(std::complex<double> s) const {
  return std::pow(s + lambda, beta) - std::pow(lambda, beta);
}

DensityResult stable_density_series(double x, double t, double beta, const StableSeriesConfig& cfg) {
  check_beta(beta);
  check_t(t);
  if (!(x > 0.0)) return zero_density();
  const double z = x * std::pow(t, -1.0 / beta);
  if (z < cfg.min_scaled_x) {
    DensityResult r;
    r.method = Method::series;
    r.error_estimate = std::numeric_limits<double>::infinity();
    return r;
  }
  const double log_z = std::log(z);
  DensityResult r = alternating_sum(
      1,
      [&](std::size_t k) {
        const double kb = static_cast<double>(k) * beta;
        return boost::math::lgamma(kb + 1.0) - boost::math::lgamma(static_cast<double>(k) + 1.0) -
               (kb + 1.0) * log_z;
      },
      [&](std::size_t k) { return (k % 2 == 1 ? 1.0 : -1.0) * std::sin(static_cast<double>(k) * beta * kPi); },
      cfg);
  return scaled(r, std::pow(t, -1.0 / beta) / kPi);
}

DensityResult stable_density_integral(double x, double t, double beta, const QuadratureSpec& spec) {
  check_beta(beta);
  check_t(t);
  if (!(x > 0.0)) return zero_density();
  simd::DampedOscillatory k;
  k.log_scale = -std::log(kPi);
  k.a = x;
  k.b = t * std::cos(beta * kPi);
  k.c = t * std::sin(beta * kPi);
  k.beta = beta;
  k.p0 = 1.0;
  SemiInfiniteHints hints;
  hints.scale = detail::first_panel_scale(x, k.c, beta);
  hints.osc_coefficient = k.c;
  hints.osc_power = beta;
  return from_quadrature(integrate_semi_infinite(detail::kernel_integrand(k), spec, hints));
}

DensityResult stable_density_kanter(double x, double t, double beta, const QuadratureSpec& spec) {
  check_beta(beta);
  check_t(t);
  if (!(x > 0.0)) return zero_density();
  const double r = 1.0 - beta;
  const double xs = x * std::pow(t, -1.0 / beta);
  const double log_z = -(beta / r) * std::log(xs);
  const double front = beta / (r * kPi * xs);
  // front * (A z) e^{-A z}, A(u) = sin(bu)^{b/(1-b)} sin((1-b)u) / sin(u)^{1/(1-b)}
  auto f = [&](double u) {
    const double log_a = (beta / r) * std::log(std::sin(beta * u)) + std::log(std::sin(r * u)) -
                         std::log(std::sin(u)) / r;
    const double az = std::exp(log_a + log_z);
    if (!std::isfinite(az)) return 0.0;
    return front * az * std::exp(-az);
  };
  DensityResult out = from_quadrature(integrate_interval(batch(f), 0.0, kPi, spec));
  return scaled(out, std::pow(t, -1.0 / beta));
}

DensityResult stable_density(double x, double t, double beta, const StableSeriesConfig& cfg,
                             const QuadratureSpec& spec) {
  DensityResult r = stable_density_series(x, t, beta, cfg);
  if (r.converged) return r;
  return stable_density_kanter(x, t, beta, spec);
}

DensityResult tempered_density(double x, double t, const TemperedStableParams& params,
                               const StableSeriesConfig& cfg, const QuadratureSpec& spec) {
  params.validate();
  check_t(t);
  if (!(x > 0.0)) return zero_density();
  DensityResult r = stable_density(x, t, params.beta, cfg, spec);
  if (params.lambda == 0.0) return r;
  return scaled(r, std::exp(-params.lambda * x + std::pow(params.lambda, params.beta) * t));
}

DensityResult inverse_stable_density_series(double x, double t, double beta, const StableSeriesConfig& cfg) {
  check_beta(beta);
  check_t(t);
  if (x < 0.0) return zero_density();
  const double scale = std::pow(t, -beta) / kPi;
  if (x == 0.0) {
    DensityResult r;
    r.value = std::pow(t, -beta) / std::tgamma(1.0 - beta);
    r.method = Method::closed_form;
    r.converged = true;
    return r;
  }
  const double log_z = std::log(x * std::pow(t, -beta));
  DensityResult r = alternating_sum(
      1,
      [&](std::size_t k) {
        const double kd = static_cast<double>(k);
        return boost::math::lgamma(kd * beta) - boost::math::lgamma(kd) + (kd - 1.0) * log_z;
      },
      [&](std::size_t k) { return (k % 2 == 1 ? 1.0 : -1.0) * std::sin(static_cast<double>(k) * beta * kPi); },
      cfg);
  return scaled(r, scale);
}

DensityResult inverse_stable_density_integral(double x, double t, double beta, const QuadratureSpec& spec) {
  check_beta(beta);
  check_t(t);
  if (!(x > 0.0)) return zero_density();
  const double cb = std::cos(beta * kPi);
  const double sb = std::sin(beta * kPi);
  // y^{beta-1} sin(beta pi - x w sb) = [sb w cos(x w sb) - cb w sin(x w sb)] / y
  simd::DampedOscillatory k;
  k.log_scale = -std::log(kPi);
  k.a = t;
  k.b = x * cb;
  k.c = x * sb;
  k.beta = beta;
  k.p1 = -cb;
  k.q1 = sb;
  k.d0 = 0.0;
  k.dy = 1.0;
  SemiInfiniteHints hints;
  hints.scale = detail::first_panel_scale(t, k.c, beta);
  hints.map_endpoint = true;
  hints.endpoint_exponent = beta - 1.0;
  hints.osc_coefficient = k.c;
  hints.osc_power = beta;
  return from_quadrature(integrate_semi_infinite(detail::kernel_integrand(k), spec, hints));
}

DensityResult inverse_stable_density(double x, double t, double beta, const StableSeriesConfig& cfg,
                                     const QuadratureSpec& spec) {
  DensityResult r = inverse_stable_density_series(x, t, beta, cfg);
  if (r.converged) return r;
  DensityResult q = inverse_stable_density_integral(x, t, beta, spec);
  if (q.converged || !(q.error_estimate >= r.error_estimate)) return q;
  return r;
}

} // namespace its
