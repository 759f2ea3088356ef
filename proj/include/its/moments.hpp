#pragma once

// q-th moments M_q(t) = E[E(t)^q] of the inverse tempered stable subordinator.
// Their Laplace transform in t is Gamma(1+q) / (s Psi(s)^q); values in t come
// from numerical inversion on a Talbot contour.

#include <complex>
#include <functional>
#include <optional>

#include "its/stable_family.hpp"

namespace its {

struct MomentQuery {
  double q = 1.0;
  double t = 1.0;
  TemperedStableParams params{};

  /// Throws DomainError unless 0 < q <= 50 and t > 0.
  void validate() const;
};

double moment_lt(double q, double s, const TemperedStableParams& params);
std::complex<double> moment_lt(double q, std::complex<double> s, const TemperedStableParams& params);

struct InversionConfig {
  int nodes = 24;
  int check_nodes = 48;
  /// Relative disagreement between the two node counts that marks a failure.
  double consistency_tol = 1e-6;
};

struct InversionResult {
  double value = 0.0;
  double check_value = 0.0;
  double relative_discrepancy = 0.0;
  bool consistent = false;
};

/// Fixed Talbot inversion of an arbitrary transform.
double talbot_invert(const std::function<std::complex<double>(std::complex<double>)>& transform, double t,
                     int nodes);

InversionResult moment_exact(const MomentQuery& query, const InversionConfig& config = {});

/// Gaver-Stehfest inversion with an even number of terms; only useful as a
/// rough cross-check in double precision.
double moment_stehfest(const MomentQuery& query, int terms = 14);

enum class Regime { small_t, large_t };

/// small_t: Gamma(1+q)/Gamma(1+q beta) t^{q beta}.
/// large_t: (lambda^{1-beta} t / beta)^q, the law of large numbers rate
/// E(t)/t -> 1/E[D(1)]. Without tempering the small-t form is exact for all t
/// and is returned for both regimes.
double moment_asymptotic(const MomentQuery& query, Regime regime);

struct MomentReport {
  double exact = 0.0;
  double small_t_asymptotic = 0.0;
  double large_t_asymptotic = 0.0;
  bool inversion_ok = false;
  std::optional<double> mc_estimate;
  std::optional<double> mc_standard_error;
};

MomentReport moment_report(const MomentQuery& query, const InversionConfig& config = {});

} // namespace its
