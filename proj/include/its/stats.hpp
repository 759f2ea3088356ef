#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace its::stats {

/// Kolmogorov-Smirnov distance sup |F_n - F| between the samples and a
/// continuous CDF.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

struct ChiSquare {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 0.0;
};

/// Pearson goodness of fit of counts in bins [edges[i], edges[i+1]) against
/// the given bin probabilities. A final bin [edges.back(), inf) receives the
/// remaining probability mass.
ChiSquare chi_square(const std::vector<double>& samples, const std::vector<double>& edges,
                     const std::vector<double>& bin_probabilities);

} // namespace its::stats
