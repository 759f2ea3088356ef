#include "its/moments.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "its/errors.hpp"

namespace its {

void MomentQuery::validate() const {
  params.validate();
  if (!(q > 0.0 && q <= 50.0)) throw DomainError("moment order q must lie in (0, 50]");
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t must be positive and finite");
}

double moment_lt(double q, double s, const TemperedStableParams& params) {
  params.validate();
  if (!(s > 0.0)) throw DomainError("moment transform needs s > 0");
  return std::tgamma(1.0 + q) / (s * std::pow(params.laplace_symbol(s), q));
}

std::complex<double> moment_lt(double q, std::complex<double> s, const TemperedStableParams& params) {
  return std::tgamma(1.0 + q) / (s * std::pow(params.laplace_symbol(s), q));
}

double talbot_invert(const std::function<std::complex<double>(std::complex<double>)>& transform, double t,
                     int nodes) {
  if (nodes < 2) throw ConfigError("Talbot inversion needs at least two nodes");
  const double r = 2.0 * nodes / (5.0 * t);
  double sum = 0.5 * (transform({r, 0.0}) * std::exp(r * t)).real();
  for (int k = 1; k < nodes; ++k) {
    const double theta = k * std::numbers::pi / nodes;
    const double cot = 1.0 / std::tan(theta);
    const std::complex<double> s(r * theta * cot, r * theta);
    const double sigma = theta + (theta * cot - 1.0) * cot;
    sum += (std::exp(t * s) * transform(s) * std::complex<double>(1.0, sigma)).real();
  }
  return r / nodes * sum;
}

InversionResult moment_exact(const MomentQuery& query, const InversionConfig& config) {
  query.validate();
  auto f = [&](std::complex<double> s) { return moment_lt(query.q, s, query.params); };
  InversionResult out;
  out.value = talbot_invert(f, query.t, config.nodes);
  out.check_value = talbot_invert(f, query.t, config.check_nodes);
  out.relative_discrepancy = std::fabs(out.value - out.check_value) / std::fabs(out.value);
  out.consistent = std::isfinite(out.value) && out.value > 0.0 && out.relative_discrepancy <= config.consistency_tol;
  return out;
}

double moment_stehfest(const MomentQuery& query, int terms) {
  query.validate();
  if (terms < 2 || terms % 2 != 0) throw ConfigError("Stehfest needs an even number of terms");
  using boost::math::factorial;
  const int half = terms / 2;
  const double ln2_t = std::numbers::ln2 / query.t;
  double sum = 0.0;
  for (int k = 1; k <= terms; ++k) {
    double v = 0.0;
    for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
      v += std::pow(j, half) * factorial<double>(2 * j) /
           (factorial<double>(half - j) * factorial<double>(j) * factorial<double>(j - 1) *
            factorial<double>(k - j) * factorial<double>(2 * j - k));
    }
    if ((k + half) % 2 != 0) v = -v;
    sum += v * moment_lt(query.q, k * ln2_t, query.params);
  }
  return ln2_t * sum;
}

double moment_asymptotic(const MomentQuery& query, Regime regime) {
  query.validate();
  const double beta = query.params.beta;
  const double lam = query.params.lambda;
  if (regime == Regime::small_t || lam == 0.0) {
    return std::exp(boost::math::lgamma(1.0 + query.q) - boost::math::lgamma(1.0 + query.q * beta) +
                    query.q * beta * std::log(query.t));
  }
  return std::pow(std::pow(lam, 1.0 - beta) * query.t / beta, query.q);
}

MomentReport moment_report(const MomentQuery& query, const InversionConfig& config) {
  MomentReport report;
  const InversionResult inv = moment_exact(query, config);
  report.exact = inv.value;
  report.inversion_ok = inv.consistent;
  report.small_t_asymptotic = moment_asymptotic(query, Regime::small_t);
  report.large_t_asymptotic = moment_asymptotic(query, Regime::large_t);
  return report;
}

} // namespace its
