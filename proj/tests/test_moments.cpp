#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "its/errors.hpp"
#include "its/its_density.hpp"
#include "its/moments.hpp"
#include "its/quadrature.hpp"
#include "its/special_fn.hpp"

using namespace its;

TEST_CASE("Laplace transform of the moments") {
  CHECK(moment_lt(1.0, 1.0, {0.5, 1.0}) == doctest::Approx(1.0 / (std::sqrt(2.0) - 1.0)).epsilon(1e-14));
  CHECK(moment_lt(2.0, 4.0, {0.5, 0.0}) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(moment_lt(1.0, 3.0, {0.3, 0.0}) == doctest::Approx(std::pow(3.0, -1.3)).epsilon(1e-14));
  const auto z = moment_lt(1.0, std::complex<double>(1.0, 0.0), {0.5, 1.0});
  CHECK(std::abs(z - 1.0 / (std::sqrt(2.0) - 1.0)) < 1e-13);
}

TEST_CASE("Talbot inversion of known transforms") {
  const auto inv = talbot_invert([](std::complex<double> s) { return 1.0 / (s + 1.0); }, 2.0, 24);
  CHECK(inv == doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
  const auto pw = talbot_invert([](std::complex<double> s) { return std::pow(s, -2.5); }, 1.7, 24);
  CHECK(pw == doctest::Approx(std::pow(1.7, 1.5) / special_fn::gamma(2.5)).epsilon(1e-10));
}

TEST_CASE("exact moments against inversion oracle") {
  struct Case {
    double q, t, beta, lambda, expected;
  };
  // mpmath Talbot inversion at 40 digits
  const Case cases[] = {
      {1.0, 1.0, 0.5, 1.0, 2.4716049381348697},   {2.0, 1.0, 0.5, 1.0, 7.5721140214548941},
      {1.0, 1e-3, 0.5, 1.0, 0.03669437529458359}, {1.5, 3.0, 0.3, 0.5, 22.87288299925318},
      {1.0, 1.0, 0.5, 0.0, 1.1283791670955126},
  };
  for (const Case& c : cases) {
    const auto r = moment_exact({c.q, c.t, {c.beta, c.lambda}});
    CAPTURE(c.q);
    CAPTURE(c.t);
    CHECK(r.consistent);
    CHECK(r.value == doctest::Approx(c.expected).epsilon(1e-9));
  }
}

TEST_CASE("untempered closed form") {
  for (double beta : {0.2, 0.5, 0.8}) {
    for (double q : {0.5, 1.0, 3.0}) {
      const double t = 2.3;
      const double exact = special_fn::gamma(1.0 + q) / special_fn::gamma(1.0 + q * beta) * std::pow(t, q * beta);
      CHECK(moment_exact({q, t, {beta, 0.0}}).value == doctest::Approx(exact).epsilon(1e-8));
    }
  }
}

TEST_CASE("Stehfest cross-check") {
  const MomentQuery q{1.0, 1.0, {0.5, 1.0}};
  CHECK(moment_stehfest(q) == doctest::Approx(moment_exact(q).value).epsilon(1e-5));
}

TEST_CASE("asymptotic forms") {
  const MomentQuery q1{1.0, 2.0, {0.5, 1.0}};
  CHECK(moment_asymptotic(q1, Regime::small_t) == doctest::Approx(std::sqrt(2.0) / special_fn::gamma(1.5)).epsilon(1e-14));
  CHECK(moment_asymptotic(q1, Regime::large_t) == doctest::Approx(4.0).epsilon(1e-14));
  const MomentQuery q2{2.0, 1e4, {0.5, 1.0}};
  const double ratio = moment_exact(q2).value / moment_asymptotic(q2, Regime::large_t);
  CHECK(ratio > 0.95);
  CHECK(ratio < 1.05);
  // without tempering the small-t form is exact for every t
  const MomentQuery u{1.0, 50.0, {0.5, 0.0}};
  CHECK(moment_asymptotic(u, Regime::large_t) == moment_asymptotic(u, Regime::small_t));
}

TEST_CASE("small-t mean at t = 1e-3") {
  const MomentQuery q{1.0, 1e-3, {0.5, 1.0}};
  CHECK(moment_asymptotic(q, Regime::small_t) == doctest::Approx(0.0356825).epsilon(1e-5));
  // the first correction, lambda^beta t^beta Gamma(1+beta)/Gamma(1+2beta), is still 2.8% here
  const double ratio = moment_exact(q).value / moment_asymptotic(q, Regime::small_t);
  CHECK(ratio == doctest::Approx(1.02835).epsilon(1e-4));
}

TEST_CASE("mean does not grow linearly at small t") {
  for (double beta : {0.3, 0.5, 0.7}) {
    const TemperedStableParams p{beta, 1.0};
    const double r = moment_exact({1.0, 2e-4, p}).value / moment_exact({1.0, 1e-4, p}).value;
    CAPTURE(beta);
    CHECK(std::fabs(r - std::pow(2.0, beta)) < 0.02);
  }
}

TEST_CASE("first moment from the density") {
  const TemperedStableParams p{0.5, 1.0};
  const double cutoff = passage_tail_cutoff(1.0, p, 1e-14);
  QuadratureSpec spec;
  spec.abs_tol = 1e-11;
  const auto m = integrate_interval(batch([&](double x) { return x * eval({x, 1.0}, p).value; }), 0.0, cutoff, spec);
  CHECK(m.converged);
  CHECK(m.value == doctest::Approx(moment_exact({1.0, 1.0, p}).value).epsilon(1e-4));
}

TEST_CASE("report and validation") {
  const auto rep = moment_report({1.0, 1.0, {0.5, 1.0}});
  CHECK(rep.inversion_ok);
  CHECK(rep.exact == doctest::Approx(2.4716049381348697).epsilon(1e-9));
  CHECK_FALSE(rep.mc_estimate.has_value());
  CHECK_THROWS_AS((MomentQuery{0.0, 1.0, {0.5, 1.0}}.validate()), DomainError);
  CHECK_THROWS_AS((MomentQuery{1.0, -1.0, {0.5, 1.0}}.validate()), DomainError);
  CHECK_THROWS_AS((MomentQuery{51.0, 1.0, {0.5, 1.0}}.validate()), DomainError);
}
