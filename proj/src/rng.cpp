#include "its/rng.hpp"

#include <cmath>
#include <numbers>

#include "its/errors.hpp"
#include "its/simd/kernels.hpp"

namespace its {
namespace {

void check_dt(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("increment length must be positive");
}

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
}

void fill_standard(double beta, Rng& rng, std::span<double> out) {
  constexpr std::size_t kBlock = 64;
  double u[kBlock];
  double w[kBlock];
  const auto& k = simd::kernels();
  for (std::size_t i = 0; i < out.size(); i += kBlock) {
    const std::size_t n = std::min(kBlock, out.size() - i);
    for (std::size_t j = 0; j < n; ++j) {
      u[j] = std::numbers::pi * uniform_open(rng);
      w[j] = -std::log(uniform_open(rng));
    }
    k.kanter_stable(beta, 0.0, u, w, out.data() + i, n);
  }
}

} // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

double uniform_open(Rng& rng) {
  for (;;) {
    const double u = std::generate_canonical<double, 53>(rng);
    if (u > 0.0) return u;
  }
}

double sample_stable_increment(double dt, double beta, Rng& rng) {
  check_dt(dt);
  check_beta(beta);
  double x;
  fill_standard(beta, rng, std::span<double>(&x, 1));
  return std::pow(dt, 1.0 / beta) * x;
}

void sample_stable_batch(double dt, double beta, Rng& rng, std::span<double> out) {
  check_dt(dt);
  check_beta(beta);
  fill_standard(beta, rng, out);
  const double scale = std::pow(dt, 1.0 / beta);
  for (double& v : out) v *= scale;
}

double sample_tempered_increment(double dt, const TemperedStableParams& params, Rng& rng, SamplerStats* stats) {
  params.validate();
  check_dt(dt);
  if (std::pow(params.lambda, params.beta) * dt > 1.0) {
    throw ConfigError("tempered increment needs lambda^beta dt <= 1; subdivide the step");
  }
  for (;;) {
    const double x = sample_stable_increment(dt, params.beta, rng);
    if (stats) ++stats->proposals;
    if (params.lambda == 0.0 || uniform_open(rng) <= std::exp(-params.lambda * x)) {
      if (stats) ++stats->accepted;
      return x;
    }
  }
}

TemperedSampler::TemperedSampler(const TemperedStableParams& params, Rng& rng)
    : params_(params), lambda_beta_(std::pow(params.lambda, params.beta)), rng_(rng) {
  params_.validate();
}

double TemperedSampler::standard_stable() {
  if (next_ == buffer_.size()) {
    fill_standard(params_.beta, rng_, buffer_);
    next_ = 0;
  }
  return buffer_[next_++];
}

double TemperedSampler::piece(double dt) { return scaled(std::pow(dt, 1.0 / params_.beta), dt); }

double TemperedSampler::scaled(double scale, double dt) {
  if (lambda_beta_ * dt > 1.0) return (*this)(dt);
  for (;;) {
    const double x = scale * standard_stable();
    ++stats_.proposals;
    if (params_.lambda == 0.0 || uniform_open(rng_) <= std::exp(-params_.lambda * x)) {
      ++stats_.accepted;
      return x;
    }
  }
}

double TemperedSampler::operator()(double dt) {
  check_dt(dt);
  const double load = lambda_beta_ * dt;
  if (load <= 1.0) return piece(dt);
  const auto pieces = static_cast<std::size_t>(std::ceil(load));
  const double sub = dt / static_cast<double>(pieces);
  double sum = 0.0;
  for (std::size_t i = 0; i < pieces; ++i) sum += piece(sub);
  return sum;
}

} // namespace its
