#include "its/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "its/errors.hpp"

namespace its {
namespace {

constexpr std::size_t kNodes = 21;
constexpr std::size_t kHalf = 11;

struct Rule {
  std::array<double, kHalf> abscissa{};
  std::array<double, kHalf> kronrod{};
  // Gauss weights indexed like abscissa; zero on Kronrod-only nodes.
  std::array<double, kHalf> gauss{};
};

const Rule& rule() {
  static const Rule r = [] {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    Rule out;
    const auto& x = gauss_kronrod<double, 21>::abscissa();
    const auto& wk = gauss_kronrod<double, 21>::weights();
    const auto& wg = gauss<double, 10>::weights();
    for (std::size_t i = 0; i < kHalf; ++i) {
      out.abscissa[i] = x[i];
      out.kronrod[i] = wk[i];
    }
    // The 10-point Gauss nodes sit at the odd Kronrod positions.
    for (std::size_t i = 0; i < wg.size(); ++i) out.gauss[2 * i + 1] = wg[i];
    return out;
  }();
  return r;
}

struct Panel {
  double lo = 0.0;
  double hi = 0.0;
  bool mapped = false;  // lo/hi are in the s coordinate of the endpoint map
  double value = 0.0;
  double error = 0.0;
  double max_abs = 0.0;
  double abs_integral = 0.0;
};

struct EndpointMap {
  double scale = 1.0;
  double gamma = 1.0;  // y = scale * s^gamma

  double y(double s) const { return scale * std::pow(s, gamma); }
  double jacobian(double s) const { return scale * gamma * std::pow(s, gamma - 1.0); }
};

// Evaluates a group of panels with one batched integrand call.
class PanelEvaluator {
public:
  PanelEvaluator(const BatchIntegrand& f, EndpointMap map) : f_(f), map_(map) {}

  void evaluate(std::span<Panel> panels) {
    const Rule& r = rule();
    const std::size_t n = panels.size() * kNodes;
    y_.resize(n);
    fy_.resize(n);
    jac_.resize(n);
    for (std::size_t p = 0; p < panels.size(); ++p) {
      const Panel& pan = panels[p];
      const double center = 0.5 * (pan.lo + pan.hi);
      const double half = 0.5 * (pan.hi - pan.lo);
      double* y = y_.data() + p * kNodes;
      double* jac = jac_.data() + p * kNodes;
      y[0] = center;
      for (std::size_t i = 1; i < kHalf; ++i) {
        y[2 * i - 1] = center - half * r.abscissa[i];
        y[2 * i] = center + half * r.abscissa[i];
      }
      for (std::size_t i = 0; i < kNodes; ++i) {
        if (pan.mapped) {
          const double s = y[i];
          y[i] = map_.y(s);
          jac[i] = map_.jacobian(s);
        } else {
          jac[i] = 1.0;
        }
      }
    }
    f_(std::span<const double>(y_.data(), n), std::span<double>(fy_.data(), n));
    for (std::size_t p = 0; p < panels.size(); ++p) {
      Panel& pan = panels[p];
      const double half = 0.5 * (pan.hi - pan.lo);
      const double* fy = fy_.data() + p * kNodes;
      const double* jac = jac_.data() + p * kNodes;
      auto g = [&](std::size_t i) {
        const double v = fy[i] * jac[i];
        return std::isfinite(v) ? v : (fy[i] == 0.0 ? 0.0 : v);
      };
      double k = r.kronrod[0] * g(0);
      double gs = r.gauss[0] * g(0);
      double abs_k = r.kronrod[0] * std::fabs(g(0));
      double mx = std::fabs(fy[0]);
      for (std::size_t i = 1; i < kHalf; ++i) {
        const double a = g(2 * i - 1);
        const double b = g(2 * i);
        k += r.kronrod[i] * (a + b);
        gs += r.gauss[i] * (a + b);
        abs_k += r.kronrod[i] * (std::fabs(a) + std::fabs(b));
        mx = std::max({mx, std::fabs(fy[2 * i - 1]), std::fabs(fy[2 * i])});
      }
      pan.value = k * half;
      pan.error = std::fabs((k - gs) * half);
      pan.abs_integral = abs_k * std::fabs(half);
      pan.max_abs = mx;
    }
  }

private:
  const BatchIntegrand& f_;
  EndpointMap map_;
  std::vector<double> y_, fy_, jac_;
};

struct HeapEntry {
  double error;
  double width;
  std::size_t index;
  bool operator<(const HeapEntry& o) const {
    if (error != o.error) return error < o.error;
    return width < o.width;  // equal error: widest panel first
  }
};

QuadratureResult refine(std::vector<Panel>& panels, PanelEvaluator& eval, const QuadratureSpec& spec,
                        double tail_error) {
  std::priority_queue<HeapEntry> heap;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    heap.push({panels[i].error, panels[i].hi - panels[i].lo, i});
  }
  auto totals = [&] {
    double v = 0.0, e = 0.0;
    for (const Panel& p : panels) {
      v += p.value;
      e += p.error;
    }
    return std::pair{v, e};
  };
  auto [value, error] = totals();
  double frozen = 0.0;
  std::size_t iterations = 0;
  std::array<Panel, 2> children;
  while (!heap.empty()) {
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::fabs(value));
    if (error + tail_error <= tol) break;
    if (tail_error > tol) break;
    if (panels.size() >= spec.max_subdivisions) break;
    const HeapEntry top = heap.top();
    heap.pop();
    Panel& parent = panels[top.index];
    const double mid = 0.5 * (parent.lo + parent.hi);
    if (!(mid > parent.lo && mid < parent.hi) ||
        (parent.hi - parent.lo) <= 64 * std::numeric_limits<double>::epsilon() * std::fabs(mid)) {
      frozen += parent.error;
      continue;
    }
    children[0] = Panel{parent.lo, mid, parent.mapped};
    children[1] = Panel{mid, parent.hi, parent.mapped};
    eval.evaluate(children);
    value += children[0].value + children[1].value - parent.value;
    error += children[0].error + children[1].error - parent.error;
    parent = children[0];
    panels.push_back(children[1]);
    heap.push({panels[top.index].error, mid - panels[top.index].lo, top.index});
    heap.push({children[1].error, children[1].hi - children[1].lo, panels.size() - 1});
    if (++iterations % 64 == 0) std::tie(value, error) = totals();
  }
  std::tie(value, error) = totals();
  QuadratureResult out;
  out.value = value;
  out.error_estimate = error + tail_error;
  out.subdivisions_used = panels.size();
  const double tol = std::max(spec.abs_tol, spec.rel_tol * std::fabs(value));
  out.converged = std::isfinite(value) && out.error_estimate <= tol && frozen <= tol;
  if (frozen > 0.0) out.error_estimate += frozen;
  return out;
}

// Zeros of sin(c y^p) strictly inside (lo, hi).
std::vector<double> oscillation_zeros(double lo, double hi, double c, double p) {
  std::vector<double> zeros;
  if (c == 0.0 || !(p > 0.0)) return zeros;
  const double ac = std::fabs(c);
  const double phase_lo = ac * std::pow(lo, p);
  const double phase_hi = ac * std::pow(hi, p);
  const double first = std::floor(phase_lo / M_PI) + 1.0;
  for (double k = first; k * M_PI < phase_hi; k += 1.0) {
    zeros.push_back(std::pow(k * M_PI / ac, 1.0 / p));
  }
  return zeros;
}

} // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ConfigError("quadrature tolerances must be positive");
  if (max_subdivisions < 1) throw ConfigError("quadrature needs at least one subdivision");
  if (!(truncation_threshold >= 0.0)) throw ConfigError("truncation threshold must be non-negative");
}

QuadratureResult integrate_interval(const BatchIntegrand& f, double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  if (a == b) return QuadratureResult{0.0, 0.0, 0, true};
  if (a > b) {
    QuadratureResult r = integrate_interval(f, b, a, spec);
    r.value = -r.value;
    return r;
  }
  PanelEvaluator eval(f, EndpointMap{});
  std::vector<Panel> panels{Panel{a, b, false}};
  eval.evaluate(panels);
  return refine(panels, eval, spec, 0.0);
}

QuadratureResult integrate_semi_infinite(const BatchIntegrand& f, const QuadratureSpec& spec,
                                         const SemiInfiniteHints& hints) {
  spec.validate();
  if (!(hints.scale > 0.0) || !std::isfinite(hints.scale)) throw ConfigError("semi-infinite scale must be positive");
  if (hints.map_endpoint && !(hints.endpoint_exponent > -1.0)) {
    throw ConfigError("endpoint exponent must exceed -1");
  }

  EndpointMap map{hints.scale, 1.0 / (1.0 + hints.endpoint_exponent)};
  PanelEvaluator eval(f, map);
  std::vector<Panel> panels;
  panels.reserve(spec.max_subdivisions + 8);

  auto split_panels = [&](double lo, double hi) {
    std::vector<Panel> group;
    std::vector<double> zeros = oscillation_zeros(lo, hi, hints.osc_coefficient, hints.osc_power);
    const std::size_t budget = spec.max_subdivisions > panels.size() ? spec.max_subdivisions - panels.size() : 0;
    if (zeros.size() + 1 > budget / 2) zeros.clear();
    double left = lo;
    for (double z : zeros) {
      if (z > left && z < hi) {
        group.push_back(Panel{left, z, false});
        left = z;
      }
    }
    group.push_back(Panel{left, hi, false});
    return group;
  };

  // First panel.
  if (hints.map_endpoint) {
    std::vector<Panel> first{Panel{0.0, 1.0, true}};
    eval.evaluate(first);
    panels.push_back(first[0]);
  } else {
    std::vector<Panel> first = split_panels(0.0, hints.scale);
    eval.evaluate(first);
    panels.insert(panels.end(), first.begin(), first.end());
  }
  double peak = 0.0;
  for (const Panel& p : panels) peak = std::max(peak, p.max_abs);

  // Geometric sweep until the integrand has been negligible for two panels.
  double lo = hints.scale;
  double width = hints.scale;
  int quiet = 0;
  int zero_run = 0;
  double tail = 0.0;
  bool swept = false;
  for (int k = 0; k < 2048; ++k) {
    const double hi = lo + width;
    if (!std::isfinite(hi) || hi > 1e300) break;
    std::vector<Panel> group = split_panels(lo, hi);
    eval.evaluate(group);
    double group_max = 0.0;
    double group_abs = 0.0;
    for (const Panel& p : group) {
      group_max = std::max(group_max, p.max_abs);
      group_abs += p.abs_integral;
    }
    panels.insert(panels.end(), group.begin(), group.end());
    peak = std::max(peak, group_max);
    if (peak > 0.0 && group_max <= spec.truncation_threshold * peak) {
      ++quiet;
      tail = group_abs;
    } else {
      quiet = 0;
    }
    zero_run = (group_max == 0.0) ? zero_run + 1 : 0;
    if (quiet >= 2 || zero_run >= 64) {
      swept = true;
      break;
    }
    lo = hi;
    width *= 2.0;
  }

  QuadratureResult out = refine(panels, eval, spec, tail);
  if (!swept) out.converged = false;
  return out;
}

} // namespace its
