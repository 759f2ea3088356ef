#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "its/errors.hpp"
#include "its/quadrature.hpp"

using namespace its;

TEST_CASE("exponential") {
  const auto r = integrate_semi_infinite(batch([](double y) { return std::exp(-y); }), {});
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("damped sine") {
  SemiInfiniteHints h;
  h.osc_coefficient = 1.0;
  const auto r = integrate_semi_infinite(batch([](double y) { return std::exp(-y) * std::sin(y); }), {}, h);
  CHECK(r.converged);
  CHECK(std::fabs(r.value - 0.5) < 1e-9);
}

TEST_CASE("exponential integral kernel") {
  const auto r = integrate_semi_infinite(batch([](double y) { return std::exp(-y) / (y + 1.0); }), {});
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(0.5963473623231940).epsilon(1e-11));
}

TEST_CASE("integrable endpoint singularity through the power map") {
  SemiInfiniteHints h;
  h.map_endpoint = true;
  h.endpoint_exponent = -0.5;
  const auto r = integrate_semi_infinite(batch([](double y) { return std::exp(-y) / std::sqrt(y); }), {}, h);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-10));
}

TEST_CASE("stretched oscillation") {
  // int_0^inf e^{-y} cos(sqrt y) dy = 1 - sqrt(pi)/2 * e^{-1/4} * erfi(1/2) has no short form;
  // use the substitution y = u^2 and compare against the plain interval rule.
  SemiInfiniteHints h;
  h.osc_coefficient = 1.0;
  h.osc_power = 0.5;
  const auto a = integrate_semi_infinite(batch([](double y) { return std::exp(-y) * std::cos(std::sqrt(y)); }), {}, h);
  const auto b = integrate_interval(batch([](double u) { return 2.0 * u * std::exp(-u * u) * std::cos(u); }), 0.0, 12.0, {});
  CHECK(a.converged);
  CHECK(std::fabs(a.value - b.value) < 1e-10);
}

TEST_CASE("finite interval") {
  const auto r = integrate_interval(batch([](double x) { return std::sin(x); }), 0.0, std::numbers::pi, {});
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
  const auto rev = integrate_interval(batch([](double x) { return std::sin(x); }), std::numbers::pi, 0.0, {});
  CHECK(rev.value == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(integrate_interval(batch([](double) { return 1.0; }), 1.0, 1.0, {}).value == 0.0);
}

TEST_CASE("budget exhaustion is reported, not hidden") {
  QuadratureSpec spec;
  spec.max_subdivisions = 4;
  const auto r = integrate_interval(batch([](double x) { return std::sin(200.0 * x); }), 0.0, 10.0, spec);
  CHECK_FALSE(r.converged);
  CHECK(r.subdivisions_used <= 5);
}

TEST_CASE("spec validation") {
  QuadratureSpec bad;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  SemiInfiniteHints h;
  h.scale = -1.0;
  CHECK_THROWS_AS(integrate_semi_infinite(batch([](double) { return 0.0; }), {}, h), ConfigError);
}
