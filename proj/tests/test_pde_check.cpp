#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "its/errors.hpp"
#include "its/pde_check.hpp"

using namespace its;

TEST_CASE("central differences") {
  auto f = [](double x) { return std::sin(x); };
  CHECK(central_difference(f, 0.7, 1e-3, 1) == doctest::Approx(std::cos(0.7)).epsilon(1e-6));
  CHECK(central_difference(f, 0.7, 1e-3, 2) == doctest::Approx(-std::sin(0.7)).epsilon(1e-6));
  CHECK(central_difference(f, 0.7, 1e-2, 3) == doctest::Approx(-std::cos(0.7)).epsilon(1e-4));
  CHECK(central_difference([](double x) { return x * x * x * x; }, 1.0, 1e-2, 4) == doctest::Approx(24.0).epsilon(1e-9));
  CHECK_THROWS_AS(central_difference(f, 0.0, 1e-3, 0), DomainError);
}

TEST_CASE("residual vanishes at beta = 1/m") {
  for (auto [m, lambda, tol] : {std::tuple{2, 0.0, 1e-3}, {2, 1.0, 1e-3}, {3, 0.0, 5e-3}}) {
    PdeCase c;
    c.m = m;
    c.lambda = lambda;
    const auto r = pde_residual(c);
    CAPTURE(m);
    CAPTURE(lambda);
    CHECK(r.relative < tol);
    CHECK(r.shrink_ratio == doctest::Approx(4.0).epsilon(0.1));
    CHECK_FALSE(r.grid_too_coarse);
    CHECK(r.residual.size() == r.x.size() * r.t.size());
  }
}

TEST_CASE("residual stays put off the lattice beta = 1/m") {
  PdeCase c;
  c.beta = 0.45;
  const auto r = pde_residual(c);
  CHECK(r.relative > 0.05);
  CHECK(r.grid_too_coarse);
}

TEST_CASE("boundary derivative and initial condition") {
  for (int m : {2, 3}) {
    CHECK(boundary_derivative_check(m) < 1e-8);
    for (double x : {0.1, 1.0, 2.0}) {
      CAPTURE(m);
      CAPTURE(x);
      CHECK(initial_condition_check(1.0 / m, x) < 1e-8);
    }
  }
  CHECK(initial_condition_check(0.5, 0.1) < 1e-7);
  CHECK_THROWS_AS(initial_condition_check(0.6, 1.0), DomainError);
}

TEST_CASE("case validation") {
  PdeCase c;
  c.m = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.t_lo = 1e-3;
  c.ht = 1e-3;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.hx = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK(PdeCase{}.density_beta() == 0.5);
}
