#include "its/selfcheck.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "its/errors.hpp"
#include "its/its_density.hpp"
#include "its/moments.hpp"
#include "its/montecarlo.hpp"
#include "its/pde_check.hpp"
#include "its/simd/kernels.hpp"
#include "its/special_fn.hpp"
#include "its/stable_family.hpp"
#include "its/stats.hpp"

namespace its {
namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

struct Check {
  const char* name;
  std::function<CheckResult(const SelfcheckOptions&)> run;
};

CheckResult result(const char* name, bool passed, std::string detail) { return {name, passed, std::move(detail)}; }

double density_mass(const TemperedStableParams& p, double t) {
  const double hi = passage_tail_cutoff(t, p, 1e-12);
  QuadratureSpec spec;
  spec.abs_tol = 1e-9;
  spec.rel_tol = 1e-8;
  spec.max_subdivisions = 200;
  auto f = [&](double x) { return eval({x, t}, p).value; };
  return integrate_interval(batch(f), 0.0, hi, spec).value;
}

const std::vector<Check>& registry() {
  static const std::vector<Check> checks = {
      {"special_fn.recurrence",
       [](const SelfcheckOptions&) {
         double worst = 0.0;
         for (double a : {-2.7, -0.5, 0.3, 3.4}) {
           for (double u : {0.01, 1.0, 7.5}) {
             const double lhs = special_fn::upper_incomplete_gamma(a + 1.0, u);
             const double rhs = a * special_fn::upper_incomplete_gamma(a, u) + std::pow(u, a) * std::exp(-u);
             worst = std::max(worst, std::fabs(lhs - rhs) / std::fabs(lhs));
           }
         }
         return result("special_fn.recurrence", worst < 1e-10, fmt("max relative error %.3g", worst));
       }},
      {"special_fn.small_argument",
       [](const SelfcheckOptions&) {
         double worst = 0.0;
         for (double a : {-0.25, -0.5, -0.9}) {
           const double z = 1e-8;
           const double g = special_fn::upper_incomplete_gamma_small_u(a, z);
           const double full = special_fn::upper_incomplete_gamma(a, z);
           worst = std::max(worst, std::fabs(g / full - 1.0));
         }
         return result("special_fn.small_argument", worst < 1e-7, fmt("max deviation %.3g", worst));
       }},
      {"quadrature.oscillatory",
       [](const SelfcheckOptions&) {
         SemiInfiniteHints h;
         h.osc_coefficient = 50.0;
         h.osc_power = 0.5;
         const auto r = integrate_semi_infinite(
             batch([](double y) { return std::exp(-0.01 * y) * std::sin(50.0 * std::sqrt(y)); }), {}, h);
         return result("quadrature.oscillatory", r.converged && std::fabs(r.value) < 1e-6,
                       fmt("value %.3g, panels %.0f", r.value, static_cast<double>(r.subdivisions_used)));
       }},
      {"stable_family.half_closed_form",
       [](const SelfcheckOptions&) {
         double worst = 0.0;
         for (double x = 0.5; x <= 5.0; x += 0.5) {
           const double exact = std::exp(-1.0 / (4.0 * x)) / (2.0 * std::sqrt(std::numbers::pi) * std::pow(x, 1.5));
           worst = std::max(worst, std::fabs(stable_density(x, 1.0, 0.5).value - exact));
         }
         return result("stable_family.half_closed_form", worst < 1e-8, fmt("max error %.3g", worst));
       }},
      {"stable_family.inverse_half_closed_form",
       [](const SelfcheckOptions&) {
         double worst = 0.0;
         for (double x = 0.0; x <= 4.0; x += 0.25) {
           const double exact = std::exp(-x * x / 4.0) / std::sqrt(std::numbers::pi);
           worst = std::max(worst, std::fabs(inverse_stable_density(x, 1.0, 0.5).value - exact));
         }
         return result("stable_family.inverse_half_closed_form", worst < 1e-8, fmt("max error %.3g", worst));
       }},
      {"its_density.normalization",
       [](const SelfcheckOptions&) {
         const double mass = density_mass({0.6, 1.0}, 1.0);
         return result("its_density.normalization", std::fabs(mass - 1.0) < 1e-5, fmt("mass %.12f", mass));
       }},
      {"its_density.representations",
       [](const SelfcheckOptions&) {
         double worst = 0.0;
         const TemperedStableParams p{0.4, 1.0};
         for (double x = 0.05; x <= 3.0; x += 0.25) {
           worst = std::max(worst, std::fabs(eval_series({x, 1.0}, p).value - eval_integral({x, 1.0}, p).value));
         }
         return result("its_density.representations", worst < 1e-6, fmt("max disagreement %.3g", worst));
       }},
      {"its_density.boundary_value",
       [](const SelfcheckOptions&) {
         const TemperedStableParams p{0.5, 1.0};
         const double d = std::fabs(eval_integral({1e-7, 1.0}, p).value - boundary_value(1.0, p));
         return result("its_density.boundary_value", d < 1e-5, fmt("difference %.3g", d));
       }},
      {"its_density.cdf_mass",
       [](const SelfcheckOptions&) {
         const double c = cdf(50.0, 1.0, {0.5, 1.0}).value;
         return result("its_density.cdf_mass", std::fabs(c - 1.0) < 1e-5, fmt("cdf(50) = %.12f", c));
       }},
      {"moments.untempered_closed_form",
       [](const SelfcheckOptions&) {
         const MomentQuery q{1.0, 1.0, {0.5, 0.0}};
         const double exact = 2.0 / std::sqrt(std::numbers::pi);
         const double d = std::fabs(moment_exact(q).value - exact) / exact;
         return result("moments.untempered_closed_form", d < 1e-8, fmt("relative error %.3g", d));
       }},
      {"moments.large_t",
       [](const SelfcheckOptions&) {
         const MomentQuery q{2.0, 1e4, {0.5, 1.0}};
         const double ratio = moment_exact(q).value / moment_asymptotic(q, Regime::large_t);
         return result("moments.large_t", ratio > 0.95 && ratio < 1.05, fmt("ratio %.6f", ratio));
       }},
      {"montecarlo.ks",
       [](const SelfcheckOptions&) {
         SimConfig cfg;
         cfg.n_paths = 2000;
         cfg.seed = 2024;
         const TemperedStableParams p{0.5, 1.0};
         const auto samples = sample_first_passage(cfg, p, 1.0);
         const double d = stats::ks_distance(samples, [&](double x) { return cdf(x, 1.0, p).value; });
         // 99.9% Kolmogorov quantile for n = 2000.
         return result("montecarlo.ks", d < 1.95 / std::sqrt(2000.0), fmt("KS distance %.4f", d));
       }},
      {"pde_check.residual",
       [](const SelfcheckOptions& o) {
         PdeCase c;
         c.m = 2;
         c.lambda = 1.0;
         c.nx = 4;
         c.nt = 4;
         const double beta = o.beta.value_or(0.5);
         const double inv = 1.0 / beta;
         const bool reciprocal = std::fabs(inv - std::round(inv)) < 1e-9 && std::round(inv) >= 2.0;
         if (reciprocal) {
           c.m = static_cast<int>(std::round(inv));
           const auto r = pde_residual(c);
           return result("pde_check.residual", r.relative < (c.m == 2 ? 1e-3 : 5e-3),
                         fmt("m = %.0f, relative residual %.3g", c.m, r.relative));
         }
         c.beta = beta;
         const auto control = pde_residual(c);
         c.beta.reset();
         const auto reference = pde_residual(c);
         const bool fails = control.relative > 10.0 * reference.relative;
         return result("pde_check.residual", fails,
                       fmt("negative control: residual %.3g vs %.3g at beta = 1/2", control.relative,
                           reference.relative));
       }},
      {"pde_check.boundary_derivative",
       [](const SelfcheckOptions&) {
         const double worst = std::max(boundary_derivative_check(2), boundary_derivative_check(3));
         return result("pde_check.boundary_derivative", worst < 1e-8, fmt("max magnitude %.3g", worst));
       }},
      {"pde_check.initial_condition",
       [](const SelfcheckOptions&) {
         double worst = 0.0;
         for (double beta : {0.5, 1.0 / 3.0}) {
           for (double x : {0.1, 1.0, 2.0}) worst = std::max(worst, initial_condition_check(beta, x));
         }
         return result("pde_check.initial_condition", worst < 1e-8, fmt("max magnitude %.3g", worst));
       }},
      {"simd.equivalence",
       [](const SelfcheckOptions&) {
         if (!simd::avx2_supported()) return result("simd.equivalence", true, "AVX2 unavailable; scalar only");
         simd::DampedOscillatory k;
         k.log_scale = 1.0 - std::log(std::numbers::pi);
         k.a = 1.0;
         k.b = 0.3;
         k.c = 0.9;
         k.beta = 0.4;
         k.p0 = 1.0;
         k.p1 = -0.3;
         k.q1 = 0.95;
         k.d0 = 1.0;
         k.dy = 1.0;
         std::vector<double> y(1001), a(y.size()), b(y.size());
         for (std::size_t i = 0; i < y.size(); ++i) y[i] = 0.05 * static_cast<double>(i);
         simd::kernels(simd::Backend::scalar).damped_oscillatory(k, y.data(), a.data(), y.size());
         simd::kernels(simd::Backend::avx2).damped_oscillatory(k, y.data(), b.data(), y.size());
         double worst = 0.0;
         for (std::size_t i = 0; i < y.size(); ++i) worst = std::max(worst, std::fabs(a[i] - b[i]));
         return result("simd.equivalence", worst < 1e-14, fmt("max difference %.3g", worst));
       }},
  };
  return checks;
}

} // namespace

std::vector<std::string> selfcheck_names() {
  std::vector<std::string> names;
  for (const auto& c : registry()) names.emplace_back(c.name);
  return names;
}

std::vector<CheckResult> run_selfcheck(const SelfcheckOptions& options) {
  std::vector<CheckResult> out;
  bool matched = false;
  for (const auto& c : registry()) {
    const std::string name = c.name;
    if (!options.only.empty() && name != options.only) continue;
    if (!options.group.empty() && name.rfind(options.group, 0) != 0) continue;
    matched = true;
    try {
      out.push_back(c.run(options));
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("exception: ") + e.what()});
    }
  }
  if (!matched && !options.only.empty()) throw ConfigError("unknown check: " + options.only);
  return out;
}

} // namespace its
