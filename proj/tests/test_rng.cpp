#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "its/errors.hpp"
#include "its/rng.hpp"
#include "its/stats.hpp"

using namespace its;

TEST_CASE("streams are reproducible and distinct") {
  Rng a = make_stream(42, 7);
  Rng b = make_stream(42, 7);
  Rng c = make_stream(42, 8);
  Rng d = make_stream(43, 7);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());
}

TEST_CASE("open uniform") {
  Rng r = make_stream(1, 0);
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform_open(r);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("Levy variates follow erfc(1/(2 sqrt x))") {
  Rng r = make_stream(2024, 0);
  std::vector<double> xs(20000);
  sample_stable_batch(1.0, 0.5, r, xs);
  const double ks = stats::ks_distance(xs, [](double x) { return std::erfc(0.5 / std::sqrt(x)); });
  CHECK(ks < 1.63 / std::sqrt(20000.0));
}

TEST_CASE("self-similar scaling") {
  Rng a = make_stream(5, 1);
  Rng b = make_stream(5, 1);
  const double beta = 0.3;
  const double x1 = sample_stable_increment(1.0, beta, a);
  const double x2 = sample_stable_increment(0.25, beta, b);
  CHECK(x2 == doctest::Approx(std::pow(0.25, 1.0 / beta) * x1).epsilon(1e-13));
}

TEST_CASE("single and batch draws agree") {
  Rng a = make_stream(9, 3);
  Rng b = make_stream(9, 3);
  std::vector<double> batch(5);
  sample_stable_batch(0.5, 0.7, b, batch);
  // each single draw consumes one block of two uniforms per variate
  CHECK(sample_stable_increment(0.5, 0.7, a) == doctest::Approx(batch[0]).epsilon(1e-15));
}

TEST_CASE("tempered increments") {
  Rng a = make_stream(11, 0);
  Rng b = make_stream(11, 0);
  CHECK(sample_tempered_increment(0.3, {0.6, 0.0}, a) == sample_stable_increment(0.3, 0.6, b));

  Rng r = make_stream(12, 0);
  CHECK_THROWS_AS(sample_tempered_increment(2.0, {0.5, 1.0}, r), ConfigError);

  // E D(1) = beta lambda^{beta-1}, Var D(1) = beta (1-beta) lambda^{beta-2}
  TemperedSampler sampler({0.5, 1.0}, r);
  const int n = 100000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sampler(1.0);
    s1 += x;
    s2 += x * x;
  }
  const double mean = s1 / n;
  const double var = s2 / n - mean * mean;
  CHECK(std::fabs(mean - 0.5) < 3.0 * std::sqrt(0.25 / n));
  // cumulants 1/2, 1/4, 3/8, 15/16: central fourth moment k4 + 3 k2^2 = 9/8
  const double se_var = std::sqrt((9.0 / 8.0 - 0.25 * 0.25) / n);
  CHECK(std::fabs(var - 0.25) < 3.0 * se_var);
  CHECK(sampler.stats().accepted <= sampler.stats().proposals);
}
