#include "its/pde_check.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/binomial.hpp>

#include "integrands.hpp"
#include "its/errors.hpp"

namespace its {
namespace {

double binomial(int n, int k) { return boost::math::binomial_coefficient<double>(n, k); }

double relative_residual(const PdeCase& pde, const EvalConfig& config, double hx, double ht, PdeResidual* out) {
  const TemperedStableParams params{pde.density_beta(), pde.lambda};
  params.validate();
  const int m = pde.m;
  std::vector<double> coef(m + 1, 0.0);
  for (int j = 1; j <= m; ++j) {
    const double lam_pow = pde.lambda == 0.0 ? (j == m ? 1.0 : 0.0)
                                             : std::pow(pde.lambda, 1.0 - static_cast<double>(j) / m);
    coef[j] = ((j % 2 == 0) ? 1.0 : -1.0) * binomial(m, j) * lam_pow;
  }
  double max_res = 0.0;
  double max_dt = 0.0;
  for (int it = 0; it < pde.nt; ++it) {
    const double t = pde.nt == 1 ? pde.t_lo : pde.t_lo + (pde.t_hi - pde.t_lo) * it / (pde.nt - 1);
    auto h_of_x = [&](double x) { return eval({x, t}, params, config).value; };
    for (int ix = 0; ix < pde.nx; ++ix) {
      const double x = pde.nx == 1 ? pde.x_lo : pde.x_lo + (pde.x_hi - pde.x_lo) * ix / (pde.nx - 1);
      double lhs = 0.0;
      for (int j = 1; j <= m; ++j) {
        if (coef[j] != 0.0) lhs += coef[j] * central_difference(h_of_x, x, hx, j);
      }
      const double dt =
          (eval({x, t + ht}, params, config).value - eval({x, t - ht}, params, config).value) / (2.0 * ht);
      const double res = lhs - dt;
      max_res = std::max(max_res, std::fabs(res));
      max_dt = std::max(max_dt, std::fabs(dt));
      if (out) {
        if (it == 0) out->x.push_back(x);
        if (ix == 0) out->t.push_back(t);
        out->residual.push_back(res);
      }
    }
  }
  if (out) {
    out->max_abs_residual = max_res;
    out->max_abs_dt = max_dt;
  }
  return max_res / max_dt;
}

} // namespace

void PdeCase::validate() const {
  if (m < 2) throw ConfigError("PDE order m must be at least 2");
  if (!(hx > 0.0) || !(ht > 0.0)) throw ConfigError("grid spacings must be positive");
  if (nx < 1 || nt < 1) throw ConfigError("grid needs at least one point per axis");
  if (!(x_lo <= x_hi) || !(t_lo <= t_hi)) throw ConfigError("grid bounds are reversed");
  // Doubled spacings are used for the shrink ratio.
  if (!(t_lo - 2.0 * ht > 0.0)) throw ConfigError("grid must stay strictly inside t > 0");
  if (!(x_lo - (m + 1) * hx > 0.0)) throw ConfigError("grid must stay strictly inside x > 0");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be non-negative");
}

double central_difference(const std::function<double(double)>& f, double x, double h, int order) {
  if (order < 1) throw DomainError("difference order must be positive");
  double sum = 0.0;
  if (order % 2 == 0) {
    for (int i = 0; i <= order; ++i) {
      sum += ((i % 2 == 0) ? 1.0 : -1.0) * binomial(order, i) * f(x + (order / 2 - i) * h);
    }
  } else {
    // Average of the two half-shifted central differences.
    const int half = (order + 1) / 2;
    for (int i = 0; i <= order; ++i) {
      const double w = ((i % 2 == 0) ? 1.0 : -1.0) * binomial(order, i);
      sum += 0.5 * w * (f(x + (half - i) * h) + f(x + (half - 1 - i) * h));
    }
  }
  return sum / std::pow(h, order);
}

PdeResidual pde_residual(const PdeCase& pde, const EvalConfig& config) {
  pde.validate();
  PdeResidual out;
  out.relative = relative_residual(pde, config, pde.hx, pde.ht, &out);
  out.coarse_relative = relative_residual(pde, config, 2.0 * pde.hx, 2.0 * pde.ht, nullptr);
  out.shrink_ratio = out.coarse_relative / out.relative;
  out.grid_too_coarse = out.relative > 1e-8 && out.shrink_ratio < 1.5;
  return out;
}

double boundary_derivative_check(int m, double t) {
  if (m < 2) throw DomainError("m must be at least 2");
  const TemperedStableParams params{1.0 / m, 0.0};
  return std::fabs(derivative_at_zero(m - 1, t, params).value);
}

DensityResult initial_condition(double beta, double x, const QuadratureSpec& spec) {
  if (!(beta > 0.0 && beta <= 0.5)) throw DomainError("initial condition check needs 0 < beta <= 1/2");
  if (!(x > 0.0)) throw DomainError("initial condition check needs x > 0");
  // With u = y^beta: h_0(x,0) = 1/(beta pi) int_0^inf e^{-x cos(beta pi) u} sin(beta pi - x sin(beta pi) u) du.
  // Near beta = 1/2 the damping vanishes; rotating the ray by beta pi/2 keeps the
  // same value and restores it.
  const double cb = std::cos(beta * std::numbers::pi);
  const double psi = cb >= 0.25 ? beta * std::numbers::pi : 0.5 * beta * std::numbers::pi;
  simd::DampedOscillatory k;
  k.log_scale = -std::log(beta * std::numbers::pi);
  k.a = x * std::cos(psi);
  k.c = x * std::sin(psi);
  k.beta = 1.0;
  k.p0 = -std::cos(psi);
  k.q0 = std::sin(psi);
  SemiInfiniteHints hints;
  hints.scale = detail::first_panel_scale(k.a, k.c, 1.0);
  hints.osc_coefficient = k.c;
  hints.osc_power = 1.0;
  const QuadratureResult q = integrate_semi_infinite(detail::kernel_integrand(k), spec, hints);
  DensityResult r;
  r.value = q.value;
  r.error_estimate = q.error_estimate;
  r.method = Method::integral;
  r.terms_or_panels = q.subdivisions_used;
  r.converged = q.converged;
  return r;
}

double initial_condition_check(double beta, double x) { return std::fabs(initial_condition(beta, x).value); }

} // namespace its
