#pragma once

// Finite-difference checks of the governing equation for beta = 1/m,
//   sum_{j=1}^m (-1)^j C(m,j) lambda^{1-j/m} d^j h/dx^j = dh/dt   (t > 0),
// and of the boundary behaviour of the untempered density.

#include <functional>
#include <optional>
#include <vector>

#include "its/its_density.hpp"

namespace its {

struct PdeCase {
  int m = 2;
  double lambda = 0.0;
  /// Density parameter; defaults to 1/m. Other values give a negative control.
  std::optional<double> beta;
  double x_lo = 0.5;
  double x_hi = 2.0;
  double t_lo = 0.5;
  double t_hi = 2.0;
  int nx = 7;
  int nt = 7;
  double hx = 1e-3;
  double ht = 1e-3;

  double density_beta() const { return beta.value_or(1.0 / m); }
  /// Throws ConfigError for m < 2, non-positive spacings or a grid touching t <= 0 or x <= m hx.
  void validate() const;
};

struct PdeResidual {
  std::vector<double> x;
  std::vector<double> t;
  /// Row-major over (t, x).
  std::vector<double> residual;
  double max_abs_residual = 0.0;
  double max_abs_dt = 0.0;
  /// max |residual| / max |dh/dt|.
  double relative = 0.0;
  /// Relative residual with both spacings doubled.
  double coarse_relative = 0.0;
  /// coarse_relative / relative; about 4 for a second-order scheme.
  double shrink_ratio = 0.0;
  /// Set when the residual does not shrink under refinement.
  bool grid_too_coarse = false;
};

PdeResidual pde_residual(const PdeCase& pde, const EvalConfig& config = {});

/// Central second-order finite difference of order `order` of f at x.
double central_difference(const std::function<double(double)>& f, double x, double h, int order);

/// |d^{m-1} h_0 / dx^{m-1}| at x = 0 for beta = 1/m and lambda = 0.
double boundary_derivative_check(int m, double t = 1.0);

/// h_0(x, 0) from its integral representation; requires 0 < beta <= 1/2.
DensityResult initial_condition(double beta, double x, const QuadratureSpec& spec = {});

/// |h_0(x, 0)|.
double initial_condition_check(double beta, double x);

} // namespace its
