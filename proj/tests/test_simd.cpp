#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "its/errors.hpp"
#include "its/its_density.hpp"
#include "its/simd/kernels.hpp"

using namespace its;
using namespace its::simd;

namespace {

std::vector<double> spread(std::size_t n, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

double max_rel(const std::vector<double>& a, const std::vector<double>& b, double floor) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::fabs(a[i] - b[i]) / std::max(std::fabs(b[i]), floor));
  }
  return worst;
}

struct BackendGuard {
  Backend saved = active_backend();
  ~BackendGuard() { set_backend(saved); }
};

} // namespace

TEST_CASE("scalar backend is always there") {
  CHECK_NOTHROW(kernels(Backend::scalar));
  CHECK(backend_name(Backend::scalar) == "scalar");
  CHECK(backend_name(Backend::avx2) == "avx2");
  if (!avx2_supported()) CHECK_THROWS_AS(set_backend(Backend::avx2), ConfigError);
}

TEST_CASE("elementary functions agree across backends") {
  if (!avx2_supported()) return;
  const KernelTable& s = kernels(Backend::scalar);
  const KernelTable& v = kernels(Backend::avx2);
  // odd length exercises the tail block
  const std::size_t n = 1023;

  auto run = [&](auto fn_s, auto fn_v, const std::vector<double>& x) {
    std::vector<double> a(n), b(n);
    fn_s(x.data(), a.data(), n);
    fn_v(x.data(), b.data(), n);
    return max_rel(b, a, 1e-300);
  };
  CHECK(run(s.exp, v.exp, spread(n, -700.0, 700.0, 1)) < 1e-14);
  CHECK(run(s.exp, v.exp, spread(n, -800.0, -700.0, 2)) < 1e-14);
  CHECK(run(s.log, v.log, spread(n, 1e-300, 1e300, 3)) < 1e-14);
  CHECK(run(s.log, v.log, spread(n, 0.5, 2.0, 4)) < 1e-13);

  std::vector<double> a(n), b(n);
  const auto ang = spread(n, -1e4, 1e4, 5);
  s.sin(ang.data(), a.data(), n);
  v.sin(ang.data(), b.data(), n);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(a[i] - b[i]) < 1e-15);
  s.cos(ang.data(), a.data(), n);
  v.cos(ang.data(), b.data(), n);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(a[i] - b[i]) < 1e-15);
}

TEST_CASE("special inputs follow the scalar path") {
  if (!avx2_supported()) return;
  const KernelTable& s = kernels(Backend::scalar);
  const KernelTable& v = kernels(Backend::avx2);
  const std::vector<double> x = {0.0, -0.0, 1e-310, INFINITY, -1.0, NAN, 1e300, 2.0};
  std::vector<double> a(x.size()), b(x.size());
  s.log(x.data(), a.data(), x.size());
  v.log(x.data(), b.data(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(a[i])) {
      CHECK(std::isnan(b[i]));
    } else if (std::isinf(a[i])) {
      CHECK(a[i] == b[i]);
    } else {
      CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-14));
    }
  }
  const std::vector<double> e = {-1000.0, 1000.0, 709.5, -745.0, 0.0, NAN, 1.0, -1.0};
  s.exp(e.data(), a.data(), e.size());
  v.exp(e.data(), b.data(), e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (std::isnan(a[i])) {
      CHECK(std::isnan(b[i]));
    } else if (std::isinf(a[i])) {
      CHECK(a[i] == b[i]);
    } else {
      CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("damped oscillatory kernel agrees across backends") {
  if (!avx2_supported()) return;
  const KernelTable& s = kernels(Backend::scalar);
  const KernelTable& v = kernels(Backend::avx2);
  DampedOscillatory k;
  k.log_scale = 0.3;
  k.a = 1.1;
  k.b = -0.4;
  k.c = 2.7;
  k.beta = 0.6;
  k.p0 = 1.0;
  k.p1 = -0.5;
  k.q0 = 0.25;
  k.q1 = 0.75;
  k.d0 = 1.0;
  k.dy = 1.0;
  auto y = spread(4001, 0.0, 40.0, 7);
  y[0] = 0.0;
  std::vector<double> a(y.size()), b(y.size());
  s.damped_oscillatory(k, y.data(), a.data(), y.size());
  v.damped_oscillatory(k, y.data(), b.data(), y.size());
  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::fabs(x));
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::fabs(a[i] - b[i]) <= 1e-13 * scale);
}

TEST_CASE("Kanter kernel agrees across backends") {
  if (!avx2_supported()) return;
  const KernelTable& s = kernels(Backend::scalar);
  const KernelTable& v = kernels(Backend::avx2);
  const std::size_t n = 517;
  const auto u = spread(n, 1e-6, std::numbers::pi - 1e-6, 11);
  auto w = spread(n, 1e-6, 20.0, 12);
  for (double beta : {0.2, 0.5, 0.8}) {
    std::vector<double> a(n), b(n);
    s.kanter_stable(beta, -0.7, u.data(), w.data(), a.data(), n);
    v.kanter_stable(beta, -0.7, u.data(), w.data(), b.data(), n);
    CAPTURE(beta);
    CHECK(max_rel(b, a, 1e-300) < 1e-12);
  }
}

TEST_CASE("density does not depend on the backend") {
  if (!avx2_supported()) return;
  BackendGuard guard;
  const TemperedStableParams p{0.6, 1.0};
  std::vector<double> a, b;
  for (Backend be : {Backend::scalar, Backend::avx2}) {
    set_backend(be);
    auto& out = be == Backend::scalar ? a : b;
    for (double x : {0.3, 1.7, 4.0, 7.5}) out.push_back(eval_integral({x, 1.0}, p).value);
  }
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::fabs(a[i] - b[i]) < 1e-11);
}
