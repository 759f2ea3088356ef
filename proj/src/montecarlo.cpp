#include "its/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>

#include "its/errors.hpp"

namespace its {

void SimConfig::validate() const {
  if (n_paths < 1) throw ConfigError("n_paths must be at least 1");
  if (!(time_step > 0.0) || !std::isfinite(time_step)) throw ConfigError("time_step must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon must be positive");
  if (refine_bisection < 0 || refine_bisection > 40) throw ConfigError("refine_bisection must lie in [0, 40]");
  for (double t : targets) {
    if (!(t > 0.0) || t > horizon) throw ConfigError("targets must lie in (0, horizon]");
  }
}

PathRecord simulate_path(const SimConfig& config, const TemperedStableParams& params, Rng& rng) {
  config.validate();
  params.validate();
  std::vector<double> targets = config.targets;
  if (targets.empty()) targets.push_back(config.horizon);
  std::sort(targets.begin(), targets.end());

  const int levels = config.refine_bisection;
  const std::int64_t coarse = std::int64_t{1} << levels;  // ticks per coarse step
  const double tick = config.time_step / static_cast<double>(coarse);
  // Typical increment h^{1/beta} for a step of 2^j ticks.
  std::vector<double> typical(static_cast<std::size_t>(levels) + 1);
  for (int j = 0; j <= levels; ++j) typical[j] = std::pow(std::ldexp(tick, j), 1.0 / params.beta);

  TemperedSampler sampler(params, rng);
  PathRecord rec;
  rec.crossings.reserve(targets.size());
  if (config.record_grid) rec.grid.emplace_back(0.0, 0.0);

  std::int64_t pos = 0;  // in ticks
  double level = 0.0;
  std::size_t next_target = 0;
  while (level <= config.horizon) {
    const double goal = next_target < targets.size() ? targets[next_target] : config.horizon;
    const double residual = goal - level;
    int j = levels;
    while (j > 0 && typical[j] > residual / 8.0) --j;
    while (pos % (std::int64_t{1} << j) != 0) --j;
    const std::int64_t step = std::int64_t{1} << j;
    const double next_level = level + sampler.scaled(typical[j], std::ldexp(tick, j));
    while (next_target < targets.size() && next_level > targets[next_target]) {
      rec.crossings.emplace_back(targets[next_target], (static_cast<double>(pos) + 0.5 * static_cast<double>(step)) * tick);
      ++next_target;
    }
    pos += step;
    level = next_level;
    if (config.record_grid && pos % coarse == 0) {
      rec.grid.emplace_back(static_cast<double>(pos / coarse) * config.time_step, level);
    }
  }
  rec.final_time = static_cast<double>(pos) * tick;
  rec.final_level = level;
  return rec;
}

double first_passage(const PathRecord& path, double t) {
  for (const auto& [target, e] : path.crossings) {
    if (target == t) return e;
  }
  if (path.grid.size() >= 2 && path.grid.back().second > t) {
    auto it = std::upper_bound(path.grid.begin(), path.grid.end(), t,
                               [](double v, const std::pair<double, double>& g) { return v < g.second; });
    const double hi = it->first;
    const double lo = std::prev(it)->first;
    return 0.5 * (lo + hi);
  }
  throw HorizonError("path never crossed the requested level");
}

std::vector<double> sample_first_passage(const SimConfig& config, const TemperedStableParams& params, double t) {
  SimConfig cfg = config;
  cfg.targets = {t};
  cfg.horizon = t;
  cfg.record_grid = false;
  cfg.validate();
  params.validate();
  std::vector<double> out(cfg.n_paths);
  std::size_t workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, cfg.n_paths);
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng = make_stream(cfg.seed, i);
      out[i] = simulate_path(cfg, params, rng).crossings.front().second;
    }
  };
  if (workers == 1) {
    run(0, cfg.n_paths);
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (cfg.n_paths + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(cfg.n_paths, begin + chunk);
    if (begin < end) pool.emplace_back(run, begin, end);
  }
  for (auto& th : pool) th.join();
  return out;
}

MomentEstimate empirical_moment(const std::vector<double>& samples, double q) {
  if (samples.empty()) throw DomainError("empirical moment needs at least one sample");
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += std::pow(x, q);
  mean /= n;
  double ss = 0.0;
  for (double x : samples) {
    const double d = std::pow(x, q) - mean;
    ss += d * d;
  }
  MomentEstimate m;
  m.estimate = mean;
  m.standard_error = samples.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return m;
}

} // namespace its
