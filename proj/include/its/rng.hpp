#pragma once

// Random variates for stable and tempered stable increments.

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

#include "its/stable_family.hpp"

namespace its {

using Rng = std::mt19937_64;

/// Independent reproducible stream for one path of a seeded run.
Rng make_stream(std::uint64_t seed, std::uint64_t stream_id);

/// Uniform on the open interval (0, 1).
double uniform_open(Rng& rng);

/// dt^{1/beta} S with S one-sided stable, E[exp(-s S)] = exp(-s^beta).
double sample_stable_increment(double dt, double beta, Rng& rng);

/// Fills out with independent stable increments using the vectorised kernel.
void sample_stable_batch(double dt, double beta, Rng& rng, std::span<double> out);

struct SamplerStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
};

/// Draw from exp(-lambda x + lambda^beta dt) f(x, dt) by rejection from the
/// stable law. Throws ConfigError when lambda^beta dt > 1.
double sample_tempered_increment(double dt, const TemperedStableParams& params, Rng& rng,
                                 SamplerStats* stats = nullptr);

/// Buffered tempered sampler for long runs of increments. Stable proposals are
/// generated in blocks through the vectorised kernel; any dt is accepted and
/// split into pieces with lambda^beta dt <= 1.
class TemperedSampler {
public:
  TemperedSampler(const TemperedStableParams& params, Rng& rng);

  double operator()(double dt);
  /// Same as operator()(dt) with scale = dt^{1/beta} supplied by the caller.
  double scaled(double scale, double dt);
  const SamplerStats& stats() const { return stats_; }

private:
  double standard_stable();
  double piece(double dt);

  TemperedStableParams params_;
  double lambda_beta_;
  Rng& rng_;
  std::array<double, 64> buffer_{};
  std::size_t next_ = 64;
  SamplerStats stats_;
};

} // namespace its
