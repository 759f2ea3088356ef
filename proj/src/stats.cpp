#include "its/stats.hpp"

#include <algorithm>
#include <cmath>

#include "its/errors.hpp"
#include "its/special_fn.hpp"

namespace its::stats {

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("KS distance needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

ChiSquare chi_square(const std::vector<double>& samples, const std::vector<double>& edges,
                     const std::vector<double>& bin_probabilities) {
  if (edges.size() < 2 || bin_probabilities.size() != edges.size()) {
    throw DomainError("chi-square needs n+1 edges and n+1 bin probabilities (last bin open)");
  }
  const std::size_t bins = edges.size();
  std::vector<double> counts(bins, 0.0);
  for (double x : samples) {
    if (x < edges.front()) throw DomainError("sample below the first chi-square edge");
    const auto it = std::upper_bound(edges.begin(), edges.end(), x);
    counts[static_cast<std::size_t>(it - edges.begin()) - 1] += 1.0;
  }
  const double n = static_cast<double>(samples.size());
  ChiSquare out;
  for (std::size_t i = 0; i < bins; ++i) {
    const double expected = n * bin_probabilities[i];
    if (!(expected > 0.0)) throw DomainError("chi-square bin with zero expected count");
    out.statistic += (counts[i] - expected) * (counts[i] - expected) / expected;
  }
  out.dof = bins - 1;
  out.p_value = special_fn::regularized_gamma_q(0.5 * static_cast<double>(out.dof), 0.5 * out.statistic);
  return out;
}

} // namespace its::stats
