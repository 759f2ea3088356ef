#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "its/errors.hpp"
#include "its/its_density.hpp"
#include "its/moments.hpp"
#include "its/montecarlo.hpp"
#include "its/pde_check.hpp"
#include "its/selfcheck.hpp"
#include "its/stats.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, end);
}

double parse_number(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw UsageError("not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

// "v", "start:stop:step" (inclusive, empty when start == stop) or "log:a:b:n".
std::vector<double> parse_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() == 1) return {parse_number(parts[0])};
  if (parts.size() == 4 && parts[0] == "log") {
    const double a = parse_number(parts[1]);
    const double b = parse_number(parts[2]);
    const double nd = parse_number(parts[3]);
    if (!(a > 0.0) || !(b > 0.0) || !(a < b)) throw UsageError("log grid needs 0 < a < b");
    if (!(nd >= 1.0) || nd != std::floor(nd) || nd > 1e7) throw UsageError("log grid needs an integer count in [1, 1e7]");
    const auto n = static_cast<std::size_t>(nd);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = n == 1 ? a : a * std::pow(b / a, static_cast<double>(i) / static_cast<double>(n - 1));
    }
    if (n > 1) g.back() = b;
    return g;
  }
  if (parts.size() != 3) throw UsageError("grid must be 'v', 'start:stop:step' or 'log:a:b:n'");
  const double start = parse_number(parts[0]);
  const double stop = parse_number(parts[1]);
  const double step = parse_number(parts[2]);
  if (!(step > 0.0)) throw UsageError("grid step must be positive");
  if (start == stop) return {};
  if (!(start < stop)) throw UsageError("grid needs start < stop");
  const double span = (stop - start) / step;
  if (span > 1e7) throw UsageError("grid has more than 1e7 points");
  const auto n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = start + static_cast<double>(i) * step;
  return g;
}

struct Output {
  std::ofstream file;
  std::ostream* stream = &std::cout;

  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-" && path != "stdout") {
      file.open(path);
      if (!file) throw UsageError("cannot open output file: " + path);
      stream = &file;
    }
  }
  std::ostream& operator*() { return *stream; }
};

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
  out << '\n';
}

// Minimal JSON number that keeps the 17 significant digits of the CSV output.
nlohmann::json jnum(double v) {
  if (!std::isfinite(v)) return num(v);
  return v;
}

struct Common {
  double beta = 0.5;
  double lambda = 1.0;
  std::string t = "1";
  std::string format = "csv";
  std::string out;
  double tol = 1e-9;
  std::size_t threads = 0;
};

void add_common(CLI::App* cmd, Common& c, bool with_t = true) {
  cmd->add_option("--beta", c.beta, "stability index in (0, 1)")->capture_default_str();
  cmd->add_option("--lambda", c.lambda, "tempering rate (>= 0)")->capture_default_str();
  if (with_t) cmd->add_option("--t", c.t, "time, or grid start:stop:step / log:a:b:n")->capture_default_str();
  cmd->add_option("--format", c.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", c.out, "output path (default stdout)");
  cmd->add_option("--tol", c.tol, "relative quadrature tolerance")->capture_default_str();
  cmd->add_option("--threads", c.threads, "worker threads (0 = all cores)")->capture_default_str();
}

its::TemperedStableParams params_of(const Common& c) {
  its::TemperedStableParams p{c.beta, c.lambda};
  try {
    p.validate();
  } catch (const its::DomainError& e) {
    throw UsageError(e.what());
  }
  return p;
}

double single_t(const Common& c) {
  const auto g = parse_grid(c.t);
  if (g.size() != 1) throw UsageError("--t must be a single value here");
  if (!(g[0] > 0.0)) throw UsageError("--t must be positive");
  return g[0];
}

its::EvalConfig eval_config(const Common& c) {
  if (!(c.tol > 0.0)) throw UsageError("--tol must be positive");
  its::EvalConfig cfg;
  cfg.quadrature.rel_tol = c.tol;
  return cfg;
}

int cmd_density(const Common& c, const std::string& xgrid) {
  const auto params = params_of(c);
  const double t = single_t(c);
  const auto xs = parse_grid(xgrid);
  const auto results = its::eval_many(xs, t, params, eval_config(c), c.threads);
  Output out(c.out);
  bool failed = false;
  nlohmann::json rows = nlohmann::json::array();
  if (c.format == "csv") write_csv_row(*out, {"x", "h", "err", "method"});
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto& r = results[i];
    // Negative values inside the error band are rounding noise.
    const double h = (r.value < 0.0 && -r.value <= r.error_estimate) ? 0.0 : r.value;
    failed = failed || !r.converged;
    const std::string err = r.converged ? num(r.error_estimate) : "unconverged";
    if (c.format == "csv") {
      write_csv_row(*out, {num(xs[i]), num(h), err, std::string(its::method_name(r.method))});
    } else {
      rows.push_back({{"x", jnum(xs[i])},
                      {"h", jnum(h)},
                      {"err", r.converged ? jnum(r.error_estimate) : nlohmann::json("unconverged")},
                      {"method", std::string(its::method_name(r.method))}});
    }
  }
  if (c.format == "json") *out << rows.dump(2) << '\n';
  return failed ? kExitNumerical : kExitOk;
}

int cmd_moments(const Common& c, double q) {
  const auto params = params_of(c);
  const auto ts = parse_grid(c.t);
  Output out(c.out);
  bool failed = false;
  nlohmann::json rows = nlohmann::json::array();
  if (c.format == "csv") write_csv_row(*out, {"t", "exact", "small_t_asym", "large_t_asym", "ratio_small", "ratio_large"});
  for (double t : ts) {
    its::MomentQuery query{q, t, params};
    try {
      query.validate();
    } catch (const its::DomainError& e) {
      throw UsageError(e.what());
    }
    const auto rep = its::moment_report(query);
    failed = failed || !rep.inversion_ok;
    const double rs = rep.exact / rep.small_t_asymptotic;
    const double rl = rep.exact / rep.large_t_asymptotic;
    if (c.format == "csv") {
      write_csv_row(*out, {num(t), rep.inversion_ok ? num(rep.exact) : "unconverged", num(rep.small_t_asymptotic),
                           num(rep.large_t_asymptotic), num(rs), num(rl)});
    } else {
      rows.push_back({{"t", jnum(t)},
                      {"exact", jnum(rep.exact)},
                      {"inversion_ok", rep.inversion_ok},
                      {"small_t_asym", jnum(rep.small_t_asymptotic)},
                      {"large_t_asym", jnum(rep.large_t_asymptotic)},
                      {"ratio_small", jnum(rs)},
                      {"ratio_large", jnum(rl)}});
    }
  }
  if (c.format == "json") *out << rows.dump(2) << '\n';
  return failed ? kExitNumerical : kExitOk;
}

int cmd_simulate(const Common& c, std::size_t paths, std::uint64_t seed, double step, int refine) {
  const auto params = params_of(c);
  const double t = single_t(c);
  if (paths < 1) throw UsageError("--paths must be at least 1");
  its::SimConfig cfg;
  cfg.n_paths = paths;
  cfg.seed = seed;
  cfg.time_step = step;
  cfg.refine_bisection = refine;
  cfg.horizon = t;
  cfg.threads = c.threads;
  try {
    cfg.validate();
  } catch (const its::ConfigError& e) {
    throw UsageError(e.what());
  }
  const auto samples = its::sample_first_passage(cfg, params, t);
  const auto m1 = its::empirical_moment(samples, 1.0);
  const auto m2 = its::empirical_moment(samples, 2.0);
  const double var = m2.estimate - m1.estimate * m1.estimate;
  const double ks = its::stats::ks_distance(samples, [&](double x) { return its::cdf(x, t, params).value; });
  const auto exact = its::moment_exact({1.0, t, params});

  Output out(c.out);
  if (c.format == "csv") {
    write_csv_row(*out, {"path_id", "t", "E_lambda"});
    for (std::size_t i = 0; i < samples.size(); ++i) write_csv_row(*out, {std::to_string(i), num(t), num(samples[i])});
    *out << "# paths=" << samples.size() << '\n'
         << "# seed=" << seed << '\n'
         << "# mean=" << num(m1.estimate) << '\n'
         << "# mean_se=" << num(m1.standard_error) << '\n'
         << "# var=" << num(var) << '\n'
         << "# exact_mean=" << num(exact.value) << '\n'
         << "# ks=" << num(ks) << '\n';
  } else {
    nlohmann::json j;
    j["samples"] = nlohmann::json::array();
    for (std::size_t i = 0; i < samples.size(); ++i) {
      j["samples"].push_back({{"path_id", i}, {"t", jnum(t)}, {"E_lambda", jnum(samples[i])}});
    }
    j["summary"] = {{"paths", samples.size()},  {"seed", seed},         {"mean", jnum(m1.estimate)},
                    {"mean_se", jnum(m1.standard_error)}, {"var", jnum(var)}, {"exact_mean", jnum(exact.value)},
                    {"ks", jnum(ks)}};
    *out << j.dump(2) << '\n';
  }
  return exact.consistent ? kExitOk : kExitNumerical;
}

int cmd_pde(const Common& c, int m, std::optional<double> beta, double hx, double ht) {
  its::PdeCase pc;
  pc.m = m;
  pc.lambda = c.lambda;
  pc.beta = beta;
  pc.hx = hx;
  pc.ht = ht;
  try {
    pc.validate();
    its::TemperedStableParams{pc.density_beta(), pc.lambda}.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const auto r = its::pde_residual(pc, eval_config(c));
  Output out(c.out);
  if (c.format == "csv") {
    write_csv_row(*out, {"x", "t", "residual"});
    for (std::size_t it = 0; it < r.t.size(); ++it) {
      for (std::size_t ix = 0; ix < r.x.size(); ++ix) {
        write_csv_row(*out, {num(r.x[ix]), num(r.t[it]), num(r.residual[it * r.x.size() + ix])});
      }
    }
    *out << "# relative=" << num(r.relative) << '\n'
         << "# coarse_relative=" << num(r.coarse_relative) << '\n'
         << "# shrink_ratio=" << num(r.shrink_ratio) << '\n'
         << "# grid_too_coarse=" << (r.grid_too_coarse ? "true" : "false") << '\n';
  } else {
    nlohmann::json j;
    j["rows"] = nlohmann::json::array();
    for (std::size_t it = 0; it < r.t.size(); ++it) {
      for (std::size_t ix = 0; ix < r.x.size(); ++ix) {
        j["rows"].push_back({{"x", jnum(r.x[ix])}, {"t", jnum(r.t[it])}, {"residual", jnum(r.residual[it * r.x.size() + ix])}});
      }
    }
    j["relative"] = jnum(r.relative);
    j["coarse_relative"] = jnum(r.coarse_relative);
    j["shrink_ratio"] = jnum(r.shrink_ratio);
    j["grid_too_coarse"] = r.grid_too_coarse;
    *out << j.dump(2) << '\n';
  }
  return r.grid_too_coarse ? kExitNumerical : kExitOk;
}

int cmd_selfcheck(const Common& c, const std::string& only, const std::string& check, std::optional<double> beta) {
  its::SelfcheckOptions opts;
  opts.only = only;
  opts.group = check;
  opts.beta = beta;
  std::vector<its::CheckResult> results;
  try {
    results = its::run_selfcheck(opts);
  } catch (const its::ConfigError& e) {
    throw UsageError(e.what());
  }
  Output out(c.out);
  bool ok = true;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : results) {
    ok = ok && r.passed;
    if (c.format == "csv") {
      *out << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << '\n';
    } else {
      rows.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    }
  }
  if (c.format == "json") *out << rows.dump(2) << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  CLI::App app{"Inverse tempered stable subordinator: densities, moments, simulation and checks"};
  app.require_subcommand(1);

  Common density_opts, moments_opts, sim_opts, pde_opts, self_opts;
  moments_opts.t = "log:1e-3:1e3:61";

  std::string xgrid = "0:4:0.01";
  auto* density = app.add_subcommand("density", "density h(x,t) on an x grid");
  add_common(density, density_opts);
  density->add_option("--x", xgrid, "x grid start:stop:step")->capture_default_str();

  double q = 1.0;
  auto* moments = app.add_subcommand("moments", "q-th moment by Laplace inversion and its asymptotes");
  add_common(moments, moments_opts);
  moments->add_option("--q", q, "moment order in (0, 50]")->capture_default_str();

  std::size_t paths = 1000;
  std::uint64_t seed = 42;
  double step = 1e-3;
  int refine = 10;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo first-passage samples E(t)");
  add_common(simulate, sim_opts);
  simulate->add_option("--paths", paths, "number of paths")->capture_default_str();
  simulate->add_option("--seed", seed, "64-bit seed")->capture_default_str();
  simulate->add_option("--step", step, "operational time step")->capture_default_str();
  simulate->add_option("--refine", refine, "step halvings near a crossing")->capture_default_str();

  int m = 2;
  std::optional<double> pde_beta;
  double hx = 1e-3, ht = 1e-3;
  pde_opts.lambda = 0.0;
  auto* pde = app.add_subcommand("pde-check", "finite-difference residual of the beta = 1/m equation");
  add_common(pde, pde_opts, false);
  pde->remove_option(pde->get_option("--beta"));
  pde->add_option("--m", m, "order m >= 2 (beta = 1/m)")->capture_default_str();
  pde->add_option("--beta", pde_beta, "density beta (default 1/m; others give a negative control)");
  pde->add_option("--hx", hx, "x spacing")->capture_default_str();
  pde->add_option("--ht", ht, "t spacing")->capture_default_str();

  std::string only, check;
  std::optional<double> self_beta;
  auto* selfcheck = app.add_subcommand("selfcheck", "run the built-in invariant checks");
  selfcheck->add_option("--only", only, "run a single named check");
  selfcheck->add_option("--check", check, "run checks whose name starts with this prefix");
  selfcheck->add_option("--beta", self_beta, "beta for the PDE residual check");
  selfcheck->add_option("--format", self_opts.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  selfcheck->add_option("--out", self_opts.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*density) return cmd_density(density_opts, xgrid);
    if (*moments) return cmd_moments(moments_opts, q);
    if (*simulate) return cmd_simulate(sim_opts, paths, seed, step, refine);
    if (*pde) return cmd_pde(pde_opts, m, pde_beta, hx, ht);
    if (*selfcheck) return cmd_selfcheck(self_opts, only, check, self_beta);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const its::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const its::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
