#include "its/its_density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "integrands.hpp"
#include "its/errors.hpp"
#include "its/special_fn.hpp"

namespace its {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_point(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t must be positive and finite");
}

void require_tempered(const TemperedStableParams& params) {
  params.validate();
  if (!(params.lambda > 0.0)) {
    throw DomainError("lambda = 0 is the inverse stable case; use inverse_stable_density");
  }
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

bool series_acceptable(const DensityResult& r) {
  return r.converged && r.error_estimate <= std::max(1e-9 * std::fabs(r.value), 1e-13);
}

} // namespace

DensityResult eval_integral(EvalPoint p, const TemperedStableParams& params, const QuadratureSpec& spec) {
  require_tempered(params);
  check_point(p.t);
  if (p.x < 0.0) return zero_density();
  const double beta = params.beta;
  const double lam = params.lambda;
  const double lb = std::pow(lam, beta);
  const double cb = std::cos(beta * kPi);
  const double sb = std::sin(beta * kPi);
  // [lambda^b sin(phi) + w sin(b pi - phi)]/(y+lambda) with phi = x w sb
  //   = [(lambda^b - cb w) sin(phi) + sb w cos(phi)]/(y+lambda)
  simd::DampedOscillatory k;
  k.log_scale = lb * p.x - lam * p.t - std::log(kPi);
  k.a = p.t;
  k.b = p.x * cb;
  k.c = p.x * sb;
  k.beta = beta;
  k.p0 = lb;
  k.p1 = -cb;
  k.q1 = sb;
  k.d0 = lam;
  k.dy = 1.0;
  SemiInfiniteHints hints;
  hints.scale = detail::first_panel_scale(p.t, k.c, beta);
  hints.map_endpoint = true;
  hints.endpoint_exponent = beta - 1.0;
  hints.osc_coefficient = k.c;
  hints.osc_power = beta;
  return from_quadrature(integrate_semi_infinite(detail::kernel_integrand(k), spec, hints));
}

DensityResult eval_series(EvalPoint p, const TemperedStableParams& params, std::size_t max_terms) {
  require_tempered(params);
  check_point(p.t);
  if (p.x < 0.0) return zero_density();
  const double beta = params.beta;
  const double lam = params.lambda;
  const double t = p.t;
  const double u = lam * t;
  const double log_t = std::log(t);
  const double log_lb = beta * std::log(lam);

  // c_j = Gamma(1 + beta j) t^{-beta j} S(-beta j, lambda t) sin(j beta pi), kept as
  // log|.| and sign, where S(a,u) = Gamma(a,u) u^{-a} e^u.
  struct Coef {
    double log_abs;
    double sign;
  };
  auto coef = [&](std::size_t j) -> Coef {
    if (j == 0) return {-std::numeric_limits<double>::infinity(), 0.0};
    const double bj = beta * static_cast<double>(j);
    const double s = std::sin(bj * kPi);
    const double scaled = special_fn::scaled_upper_incomplete_gamma(-bj, u);
    return {boost::math::lgamma(1.0 + bj) - bj * log_t + std::log(scaled) + std::log(std::fabs(s)),
            s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0)};
  };

  DensityResult r;
  r.method = Method::series;
  const double log_x = p.x > 0.0 ? std::log(p.x) : -std::numeric_limits<double>::infinity();
  // log(1 + (lambda t)^beta) bounds the lambda^beta c_k part against c_{k+1}.
  const double log_tail = std::log1p(std::pow(u, beta));
  double sum = 0.0;
  double abs_sum = 0.0;
  double prev_env = -std::numeric_limits<double>::infinity();
  bool decaying = false;
  Coef ck = coef(0);
  Coef ck1 = coef(1);
  std::size_t k = 0;
  for (; k < max_terms; ++k) {
    // term_k = (-1)^k x^k/k! e^{-u} (c_{k+1} - lambda^beta c_k)
    const double base = (k == 0 ? 0.0 : static_cast<double>(k) * log_x) -
                        boost::math::lgamma(static_cast<double>(k) + 1.0) - u;
    const double la = base + ck1.log_abs;
    const double lb = base + log_lb + ck.log_abs;
    const double term = (k % 2 == 0 ? 1.0 : -1.0) * (ck1.sign * std::exp(la) - ck.sign * std::exp(lb));
    // Envelope without the sine factors, which can vanish for rational beta.
    const double bj = beta * static_cast<double>(k + 1);
    const double env = base + boost::math::lgamma(1.0 + bj) - bj * log_t + log_tail;
    sum += term;
    abs_sum += std::fabs(term);
    if (k > 0 && env < prev_env) decaying = true;
    prev_env = env;
    if (p.x == 0.0) {
      k = 0;
      break;
    }
    if (decaying && std::exp(env) <= 1e-16 * std::max(std::fabs(sum), 1e-300) && k >= 2) break;
    ck = ck1;
    ck1 = coef(k + 2);
  }
  const double pref = std::exp(std::pow(lam, beta) * p.x) / kPi;
  r.terms_or_panels = k + 1;
  r.value = pref * sum;
  if (p.x == 0.0) {
    r.error_estimate = pref * 4.0 * kEps * abs_sum;
    r.converged = true;
    return r;
  }
  const double next_base = static_cast<double>(k + 1) * log_x - boost::math::lgamma(static_cast<double>(k) + 2.0) - u;
  const double bj = beta * static_cast<double>(k + 2);
  const double next_env = std::exp(next_base + boost::math::lgamma(1.0 + bj) - bj * log_t + log_tail);
  r.error_estimate = pref * (next_env + 16.0 * kEps * abs_sum);
  r.converged = k < max_terms && decaying && std::isfinite(r.value) &&
                r.error_estimate <= std::max(1e-9 * std::fabs(r.value), 1e-13);
  return r;
}

double boundary_value(double t, const TemperedStableParams& params) {
  params.validate();
  check_point(t);
  const double beta = params.beta;
  if (params.lambda == 0.0) return std::pow(t, -beta) / std::tgamma(1.0 - beta);
  const double sb = std::sin(beta * kPi);
  const double u = params.lambda * t;
  if (u < special_fn::kMinLowerLimit) {
    const double g = special_fn::upper_incomplete_gamma_small_u(-beta, u);
    return sb / kPi * std::pow(params.lambda, beta) * std::tgamma(1.0 + beta) * g;
  }
  // lambda^b Gamma(1+b) Gamma(-b, u) = e^{-u} * weighted_exp_integral(b, lambda, t)
  return sb / kPi * std::exp(-u) * special_fn::weighted_exp_integral(beta, params.lambda, t);
}

DensityResult eval(EvalPoint p, const TemperedStableParams& params, const EvalConfig& config) {
  params.validate();
  check_point(p.t);
  if (p.x < 0.0) return zero_density();
  if (p.x == 0.0) {
    DensityResult r;
    r.value = boundary_value(p.t, params);
    r.error_estimate = 16.0 * kEps * std::fabs(r.value);
    r.method = Method::closed_form;
    r.converged = true;
    return r;
  }
  if (params.lambda == 0.0) {
    StableSeriesConfig cfg;
    cfg.max_terms = config.max_terms;
    return inverse_stable_density(p.x, p.t, params.beta, cfg, config.quadrature);
  }
  const bool series_ok = params.lambda * p.t >= config.series_min_lambda_t;
  const bool prefer_series = series_ok && p.x * std::pow(params.lambda, params.beta) <= config.series_max_x_scale;
  if (prefer_series) {
    DensityResult s = eval_series(p, params, config.max_terms);
    if (series_acceptable(s)) return s;
    DensityResult q = eval_integral(p, params, config.quadrature);
    if (q.converged || q.error_estimate <= s.error_estimate) return q;
    return s;
  }
  DensityResult q = eval_integral(p, params, config.quadrature);
  if (q.converged) return q;
  DensityResult c = eval_convolution(p, params, config.quadrature);
  if (c.converged || c.error_estimate < q.error_estimate) q = c;
  if (q.converged || !series_ok) return q;
  DensityResult s = eval_series(p, params, config.max_terms);
  return s.error_estimate < q.error_estimate ? s : q;
}

DensityResult eval_convolution(EvalPoint p, const TemperedStableParams& params, const QuadratureSpec& spec) {
  params.validate();
  check_point(p.t);
  if (!(params.lambda > 0.0)) throw DomainError("convolution form needs lambda > 0");
  if (p.x <= 0.0) return zero_density();
  const double beta = params.beta;
  const double lambda = params.lambda;
  const double t = p.t;
  const double gamma_exp = 1.0 / (1.0 - beta);
  const double tail_scale = beta * std::pow(lambda, beta) / boost::math::tgamma(1.0 - beta);
  // s = t (1 - w^gamma) removes the (t - s)^{-beta} singularity of the Levy tail.
  auto f = [&](double w) {
    if (w <= 0.0) return 0.0;
    const double u = t * std::pow(w, gamma_exp);
    const double s = t - u;
    if (!(s > 0.0)) return 0.0;
    const double g = tempered_density(s, p.x, params).value;
    if (g == 0.0) return 0.0;
    const double lu = lambda * u;
    const double tail = tail_scale * (lu < special_fn::kMinLowerLimit ? special_fn::upper_incomplete_gamma_small_u(-beta, lu)
                                                                      : special_fn::upper_incomplete_gamma(-beta, lu));
    return g * tail * t * gamma_exp * std::pow(w, gamma_exp - 1.0);
  };
  const QuadratureResult q = integrate_interval(batch(f), 0.0, 1.0, spec);
  DensityResult r;
  r.value = q.value;
  r.error_estimate = q.error_estimate;
  r.method = Method::integral;
  r.terms_or_panels = q.subdivisions_used;
  r.converged = q.converged;
  return r;
}

std::vector<DensityResult> eval_many(const std::vector<double>& xs, double t, const TemperedStableParams& params,
                                     const EvalConfig& config, std::size_t threads) {
  params.validate();
  check_point(t);
  std::vector<DensityResult> out(xs.size());
  std::size_t workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(xs.size(), 1));
  auto run = [&](std::size_t w) {
    for (std::size_t i = w; i < xs.size(); i += workers) out[i] = eval({xs[i], t}, params, config);
  };
  if (workers <= 1) {
    run(0);
    return out;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  for (auto& th : pool) th.join();
  return out;
}

double derivative_at_zero_untempered(int k, double t, double beta) {
  if (k < 0) throw DomainError("derivative order must be non-negative");
  check_point(t);
  const double a = 1.0 - (k + 1) * beta;
  if (a <= 0.0 && a == std::floor(a)) return 0.0;
  return ((k % 2 == 0) ? 1.0 : -1.0) * std::pow(t, -(k + 1) * beta) / std::tgamma(a);
}

DensityResult derivative_at_zero(int k, double t, const TemperedStableParams& params, const QuadratureSpec& spec,
                                 DerivativePhase phase) {
  params.validate();
  check_point(t);
  if (k < 0) throw DomainError("derivative order must be non-negative");
  const double beta = params.beta;
  const double lam = params.lambda;
  if (lam == 0.0 && (beta > 0.5 || (k + 1) * beta > 1.0 + 1e-12)) {
    throw DomainError("untempered derivative at zero needs beta <= 1/2 and (k+1) beta <= 1");
  }
  if (k == 0 && lam > 0.0 && phase == DerivativePhase::beta_pi_minus_k_alpha) {
    DensityResult r;
    r.value = boundary_value(t, params);
    r.error_estimate = 16.0 * kEps * std::fabs(r.value);
    r.method = Method::closed_form;
    r.converged = true;
    return r;
  }
  const double lb = std::pow(lam, beta);
  const double cb = std::cos(beta * kPi);
  const double sb = std::sin(beta * kPi);
  const double kd = static_cast<double>(k);
  const double phase_sign = phase == DerivativePhase::beta_pi_minus_k_alpha ? 1.0 : -1.0;
  const double log_pref = -lam * t - std::log(kPi);
  auto f = [=](double y) {
    if (y <= 0.0) return 0.0;
    const double w = std::pow(y, beta);
    const double re = lb - w * cb;
    const double im = w * sb;
    const double alpha = std::atan2(im, re);
    const double log_r = 0.5 * std::log(re * re + im * im);
    const double bracket = lb * std::sin(kd * alpha) + w * phase_sign * std::sin(beta * kPi - kd * alpha);
    return std::exp(log_pref - t * y + kd * log_r) * bracket / (y + lam);
  };
  SemiInfiniteHints hints;
  hints.scale = 1.0 / t;
  const double p = lam > 0.0 ? beta - 1.0 : (k + 1) * beta - 1.0;
  if (p < 0.0) {
    hints.map_endpoint = true;
    hints.endpoint_exponent = p;
  }
  return from_quadrature(integrate_semi_infinite(batch(f), spec, hints));
}

double passage_tail_bound(double x, double t, const TemperedStableParams& params) {
  params.validate();
  check_point(t);
  if (!(x > 0.0)) return 1.0;
  const double beta = params.beta;
  const double s = std::pow(x * beta / t, 1.0 / (1.0 - beta)) - params.lambda;
  if (!(s > 0.0)) return 1.0;
  const double exponent = s * t - x * params.laplace_symbol(s);
  return std::min(1.0, std::exp(exponent));
}

double passage_tail_cutoff(double t, const TemperedStableParams& params, double eps) {
  double x = 1.0;
  for (int i = 0; i < 2000 && passage_tail_bound(x, t, params) > eps; ++i) x *= 2.0;
  return x;
}

DensityResult cdf(double x, double t, const TemperedStableParams& params, const QuadratureSpec& spec) {
  params.validate();
  check_point(t);
  if (!(x > 0.0)) return zero_density();
  const double bound = passage_tail_bound(x, t, params);
  if (bound < 1e-13) {
    DensityResult r;
    r.value = 1.0 - 0.5 * bound;
    r.error_estimate = 0.5 * bound;
    r.method = Method::closed_form;
    r.converged = true;
    return r;
  }
  const double beta = params.beta;
  const double lam = params.lambda;
  simd::DampedOscillatory k;
  k.log_scale = std::pow(lam, beta) * x - lam * t - std::log(kPi);
  k.a = t;
  k.b = x * std::cos(beta * kPi);
  k.c = x * std::sin(beta * kPi);
  k.beta = beta;
  k.p0 = 1.0;
  k.d0 = lam;
  k.dy = 1.0;
  SemiInfiniteHints hints;
  hints.scale = detail::first_panel_scale(t, k.c, beta);
  hints.map_endpoint = true;
  hints.endpoint_exponent = beta - 1.0;
  hints.osc_coefficient = k.c;
  hints.osc_power = beta;
  DensityResult r = from_quadrature(integrate_semi_infinite(detail::kernel_integrand(k), spec, hints));
  r.value = std::clamp(r.value, 0.0, 1.0);
  return r;
}

} // namespace its
