#pragma once

#include <cmath>
#include <stdexcept>

#include "lpwave/grid.hpp"

namespace lpwave {

/// Parameters of the data-dependent IRLS weights.
///
/// p is the norm exponent. The reweighting path requires p < 2; p == 2 is the
/// least-squares baseline where the weights degenerate to the constant
/// epsilon / (1 + epsilon). epsilon normalizes the weights into (0, 1] and is
/// held fixed across iterations (default 0.1).
struct WeightParams {
  double p = 1.0;
  double epsilon = 0.1;

  void validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("WeightParams: epsilon must be > 0");
    if (!(p <= 2.0)) throw std::invalid_argument("WeightParams: p must be <= 2");
    if (!std::isfinite(p)) throw std::invalid_argument("WeightParams: p must be finite");
  }
};

struct WeightPair {
  ScalarField u;  ///< weights on x-direction residuals; last column is 0
  ScalarField v;  ///< weights on y-direction residuals; last row is 0
};

namespace detail {

/// epsilon / (|r|^(2-p) + epsilon), with the zero-residual branch returning
/// exactly 1. |r|^(2-p) is evaluated as exp((2-p) * log|r|) since p is a
/// continuous parameter.
inline double residual_weight(double r, double p, double epsilon) {
  if (!std::isfinite(r)) throw std::domain_error("compute_weights: non-finite residual");
  if (p == 2.0) return epsilon / (1.0 + epsilon);
  if (r == 0.0) return 1.0;
  const double mag = std::exp((2.0 - p) * std::log(std::fabs(r)));
  return epsilon / (mag + epsilon);
}

}  // namespace detail

/// Computes the IRLS weight fields U, V for the current wavefront iterate phi
/// against the measured gradient field psi.
///
/// U(i,j) weighs the x residual phi(i,j+1) - phi(i,j) - psi.x(i,j) and V(i,j)
/// the y residual phi(i+1,j) - phi(i,j) - psi.y(i,j); differences are taken in
/// cell units (unit spacing). Interior weights lie in (0, 1]. The weights in
/// the last column of U and the last row of V are exactly 0: they stand for
/// the boundary flux terms dropped by the natural boundary condition, which
/// keeps the system assembly free of edge cases.
inline WeightPair compute_weights(const ScalarField& phi, const GradientField& psi,
                                  const WeightParams& params) {
  params.validate();
  detail::require_same_grid(phi.grid, psi.grid, "compute_weights");
  const int m = phi.grid.rows, n = phi.grid.cols;

  WeightPair w{ScalarField(phi.grid), ScalarField(phi.grid)};
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n - 1; ++j) {
      const double r = phi.at(i, j + 1) - phi.at(i, j) - psi.x.at(i, j);
      w.u.at(i, j) = detail::residual_weight(r, params.p, params.epsilon);
    }
    w.u.at(i, n - 1) = 0.0;
  }
  for (int i = 0; i < m - 1; ++i) {
    for (int j = 0; j < n; ++j) {
      const double r = phi.at(i + 1, j) - phi.at(i, j) - psi.y.at(i, j);
      w.v.at(i, j) = detail::residual_weight(r, params.p, params.epsilon);
    }
  }
  for (int j = 0; j < n; ++j) w.v.at(m - 1, j) = 0.0;
  return w;
}

/// Constant weight fields of the least-squares baseline: epsilon/(1+epsilon)
/// at every interior position, 0 on the dropped boundary column/row.
inline WeightPair constant_weights(const Grid& grid, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("constant_weights: epsilon must be > 0");
  const double w0 = epsilon / (1.0 + epsilon);
  WeightPair w{ScalarField(grid), ScalarField(grid)};
  for (int i = 0; i < grid.rows; ++i)
    for (int j = 0; j < grid.cols - 1; ++j) w.u.at(i, j) = w0;
  for (int i = 0; i < grid.rows - 1; ++i)
    for (int j = 0; j < grid.cols; ++j) w.v.at(i, j) = w0;
  return w;
}

}  // namespace lpwave
