#pragma once

// Path simulation of the tempered stable subordinator D(u) and first-passage
// times E(t) = inf{u > 0 : D(u) > t}.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "its/rng.hpp"
#include "its/stable_family.hpp"

namespace its {

struct SimConfig {
  std::size_t n_paths = 1000;
  /// Operational-time grid spacing.
  double time_step = 1e-3;
  /// Paths are simulated until D exceeds this level.
  double horizon = 1.0;
  std::uint64_t seed = 42;
  /// Extra halvings of the step allowed near a crossing.
  int refine_bisection = 10;
  /// Physical times whose first passages are recorded on every path. Empty
  /// means {horizon}.
  std::vector<double> targets;
  /// Keep the (u, D(u)) skeleton on the coarse grid.
  bool record_grid = false;
  /// Worker threads for multi-path runs; 0 uses the hardware concurrency.
  std::size_t threads = 0;

  /// Throws ConfigError on invalid settings.
  void validate() const;
};

struct PathRecord {
  /// (u, D(u)) on u = 0, delta, 2 delta, ... when recorded.
  std::vector<std::pair<double, double>> grid;
  /// (t, E(t)) for each configured target, in target order.
  std::vector<std::pair<double, double>> crossings;
  double final_time = 0.0;
  double final_level = 0.0;
};

/// Simulates one path. Steps of length delta are refined near each target:
/// while the typical increment of the current step, h^{1/beta}, exceeds one
/// eighth of the remaining distance to the target, h is halved (at most
/// refine_bisection times). A crossing inside a step of length h is reported
/// at the step midpoint.
PathRecord simulate_path(const SimConfig& config, const TemperedStableParams& params, Rng& rng);

/// Cached crossing for t, or the midpoint of the recorded grid bracket.
/// Throws HorizonError when the path never reached t.
double first_passage(const PathRecord& path, double t);

/// E(t) for every path of a seeded run; entry i comes from stream i, so the
/// result does not depend on the number of threads.
std::vector<double> sample_first_passage(const SimConfig& config, const TemperedStableParams& params, double t);

struct MomentEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

/// Sample mean of x^q with its plug-in standard error.
MomentEstimate empirical_moment(const std::vector<double>& samples, double q);

} // namespace its
