#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "lpwave/grid.hpp"

namespace lpwave {

/// Normalized error Q(mu, nu) = ||mu - nu||_2 / (||mu||_2 + ||nu||_2).
/// Ranges from 0 (perfect agreement) to 1 (total disagreement); two
/// identically zero fields agree perfectly (Q = 0).
inline double q_error(const ScalarField& mu, const ScalarField& nu) {
  detail::require_same_grid(mu.grid, nu.grid, "q_error");
  double diff = 0.0, nmu = 0.0, nnu = 0.0;
  for (std::size_t k = 0; k < mu.values.size(); ++k) {
    const double d = mu.values[k] - nu.values[k];
    diff += d * d;
    nmu += mu.values[k] * mu.values[k];
    nnu += nu.values[k] * nu.values[k];
  }
  const double den = std::sqrt(nmu) + std::sqrt(nnu);
  if (den == 0.0) return 0.0;
  return std::sqrt(diff) / den;
}

/// Root-mean-square of a sample vector.
inline double rms(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

/// Largest absolute elementwise difference.
inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  detail::require_same_grid(a.grid, b.grid, "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k)
    m = std::max(m, std::fabs(a.values[k] - b.values[k]));
  return m;
}

}  // namespace lpwave
