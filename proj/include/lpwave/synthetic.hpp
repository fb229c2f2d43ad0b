#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "lpwave/grid.hpp"
#include "lpwave/metrics.hpp"
#include "lpwave/rng.hpp"

namespace lpwave {

enum class GradientMode { discrete, analytic };

inline GradientMode parse_gradient_mode(const std::string& s) {
  if (s == "discrete") return GradientMode::discrete;
  if (s == "analytic") return GradientMode::analytic;
  throw std::invalid_argument("gradient mode must be 'discrete' or 'analytic', got '" + s + "'");
}

/// Test-surface generation parameters. The surface is sampled on
/// [-1,1] x [-1,1]; coord_scale stretches the coordinates fed to the peaks
/// expression (coord_scale = 3 reproduces the classical peaks plot range).
/// The grid carries unit spacing: gradients are expressed per cell.
struct SyntheticSpec {
  Grid grid{480, 640, 1.0, 1.0};
  double coord_scale = 1.0;
  GradientMode mode = GradientMode::discrete;

  void validate() const {
    grid.validate();
    if (!(coord_scale > 0.0)) throw std::invalid_argument("SyntheticSpec: coord_scale must be > 0");
  }
  double x_of(int j) const { return -1.0 + 2.0 * j / (grid.cols - 1); }
  double y_of(int i) const { return -1.0 + 2.0 * i / (grid.rows - 1); }
};

namespace detail {

/// Scaled peaks surface: three Gaussian-modulated polynomial bumps.
inline double peaks(double x, double y) {
  const double e1 = std::exp(-x * x - (y + 1.0) * (y + 1.0));
  const double e2 = std::exp(-x * x - y * y);
  const double e3 = std::exp(-(x + 1.0) * (x + 1.0) - y * y);
  return 15.0 * (1.0 - x) * (1.0 - x) * e1 - 50.0 * (x / 5.0 - x * x * x - y * y * y * y * y) * e2 -
         (5.0 / 3.0) * e3;
}

inline double peaks_dx(double x, double y) {
  const double e1 = std::exp(-x * x - (y + 1.0) * (y + 1.0));
  const double e2 = std::exp(-x * x - y * y);
  const double e3 = std::exp(-(x + 1.0) * (x + 1.0) - y * y);
  return -30.0 * (1.0 - x) * e1 - 30.0 * x * (1.0 - x) * (1.0 - x) * e1 -
         50.0 * (0.2 - 3.0 * x * x) * e2 +
         100.0 * x * (x / 5.0 - x * x * x - y * y * y * y * y) * e2 +
         (10.0 / 3.0) * (x + 1.0) * e3;
}

inline double peaks_dy(double x, double y) {
  const double e1 = std::exp(-x * x - (y + 1.0) * (y + 1.0));
  const double e2 = std::exp(-x * x - y * y);
  const double e3 = std::exp(-(x + 1.0) * (x + 1.0) - y * y);
  const double y4 = y * y * y * y;
  return -30.0 * (y + 1.0) * (1.0 - x) * (1.0 - x) * e1 + 250.0 * y4 * e2 +
         100.0 * y * (x / 5.0 - x * x * x - y4 * y) * e2 + (10.0 / 3.0) * y * e3;
}

}  // namespace detail

/// The discontinuous synthetic wavefront: a scaled peaks surface with its
/// sign flipped on the x < 0 half plane, creating a step along the x = 0
/// line. i indexes y (rows), j indexes x (columns).
inline ScalarField peaks_wavefront(const SyntheticSpec& spec) {
  spec.validate();
  ScalarField phi(spec.grid);
  for (int i = 0; i < spec.grid.rows; ++i) {
    const double y = spec.coord_scale * spec.y_of(i);
    for (int j = 0; j < spec.grid.cols; ++j) {
      const double xj = spec.x_of(j);
      const double t = detail::peaks(spec.coord_scale * xj, y);
      phi.at(i, j) = (xj >= 0.0) ? t : -t;
    }
  }
  return phi;
}

/// Produces the gradient field of a synthetic wavefront, in cell units.
///
/// discrete: forward differences of phi with unit spacing; exactly
/// integrable, the jump at x = 0 is encoded in the data.
/// analytic: the closed-form surface gradient (sign flip applied pointwise)
/// scaled by the physical cell spacing; the jump is absent from the data, so
/// samples bridging x = 0 are inconsistent with any single-valued surface.
/// The dropped boundary column/row is stored as 0 in both modes.
inline GradientField gradient_of(const ScalarField& phi, GradientMode mode,
                                 const SyntheticSpec& spec) {
  spec.validate();
  detail::require_same_grid(phi.grid, spec.grid, "gradient_of");
  if (mode == GradientMode::discrete) {
    const int m = phi.grid.rows, n = phi.grid.cols;
    GradientField g(phi.grid);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n - 1; ++j) g.x.at(i, j) = phi.at(i, j + 1) - phi.at(i, j);
    for (int i = 0; i < m - 1; ++i)
      for (int j = 0; j < n; ++j) g.y.at(i, j) = phi.at(i + 1, j) - phi.at(i, j);
    return g;
  }

  // Analytic mode needs the closed form, so the input must actually be the
  // synthetic surface for this spec; spot-check a few samples.
  {
    const ScalarField probe = peaks_wavefront(spec);
    const int m = spec.grid.rows, n = spec.grid.cols;
    const int is[3] = {0, m / 2, m - 1};
    const int js[3] = {0, n / 2, n - 1};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (std::fabs(phi.at(is[a], js[b]) - probe.at(is[a], js[b])) > 1e-9)
          throw std::invalid_argument("gradient_of: analytic mode requires the synthetic wavefront");
  }

  const int m = spec.grid.rows, n = spec.grid.cols;
  const double cell_x = 2.0 / (n - 1);  // physical x extent per cell
  const double cell_y = 2.0 / (m - 1);
  GradientField g(spec.grid);
  for (int i = 0; i < m; ++i) {
    const double y = spec.coord_scale * spec.y_of(i);
    for (int j = 0; j < n; ++j) {
      const double xj = spec.x_of(j);
      const double sgn = (xj >= 0.0) ? 1.0 : -1.0;
      const double x = spec.coord_scale * xj;
      if (j < n - 1)
        g.x.at(i, j) = sgn * detail::peaks_dx(x, y) * spec.coord_scale * cell_x;
      if (i < m - 1)
        g.y.at(i, j) = sgn * detail::peaks_dy(x, y) * spec.coord_scale * cell_y;
    }
  }
  return g;
}

/// Adds i.i.d. zero-mean Gaussian noise to each gradient component, with
/// sigma = (level_percent / 100) * rms(component). The draw for a cell is a
/// pure function of (seed, component, cell index); level 0 returns the input
/// unchanged bit for bit.
inline GradientField add_noise(const GradientField& psi, double level_percent,
                               std::uint64_t seed) {
  if (level_percent < 0.0) throw std::invalid_argument("add_noise: level must be >= 0");
  GradientField out = psi;
  if (level_percent == 0.0) return out;
  const double sx = (level_percent / 100.0) * rms(psi.x.values);
  const double sy = (level_percent / 100.0) * rms(psi.y.values);
  for (std::size_t k = 0; k < out.x.values.size(); ++k)
    out.x.values[k] += sx * rng::gaussian(seed, rng::kStreamNoiseX, k);
  for (std::size_t k = 0; k < out.y.values.size(); ++k)
    out.y.values[k] += sy * rng::gaussian(seed, rng::kStreamNoiseY, k);
  return out;
}

/// Sinusoidal carrier pattern parameters. The pattern direction v must be a
/// unit vector; period is in the same length units as the grid coordinates
/// (j * hx, i * hy).
struct FringeSpec {
  double a = 0.5;                ///< background level
  double b = 0.5;                ///< modulation amplitude
  std::optional<ScalarField> a_field;  ///< per-pixel background override
  std::optional<ScalarField> b_field;  ///< per-pixel modulation override
  double period = 16.0;          ///< q
  double vx = 1.0, vy = 0.0;     ///< pattern normal direction
  double screen_distance = 1.0;  ///< D, slope-to-displacement factor

  void validate() const {
    if (!(period > 0.0)) throw std::invalid_argument("FringeSpec: period must be > 0");
    if (std::fabs(std::sqrt(vx * vx + vy * vy) - 1.0) > 1e-12)
      throw std::invalid_argument("FringeSpec: direction must be a unit vector");
  }
};

/// Renders the fringe intensity a + b cos((2 pi / q)(x.v + D grad(phi).v))
/// seen through a wavefront phi; the wavefront enters only through its
/// forward-difference gradient. Intended for visual parity with captured
/// deflectometry patterns.
inline ScalarField render_fringe(const ScalarField& phi, const FringeSpec& spec) {
  spec.validate();
  if (spec.a_field) detail::require_same_grid(spec.a_field->grid, phi.grid, "render_fringe a");
  if (spec.b_field) detail::require_same_grid(spec.b_field->grid, phi.grid, "render_fringe b");
  const ScalarField gx = forward_diff_x(phi);
  const ScalarField gy = forward_diff_y(phi);
  const double two_pi_over_q = 2.0 * 3.14159265358979323846 / spec.period;

  ScalarField img(phi.grid);
  for (int i = 0; i < phi.grid.rows; ++i) {
    const double y = i * phi.grid.hy;
    for (int j = 0; j < phi.grid.cols; ++j) {
      const double x = j * phi.grid.hx;
      const double carrier = x * spec.vx + y * spec.vy;
      const double shift = spec.screen_distance * (gx.at(i, j) * spec.vx + gy.at(i, j) * spec.vy);
      const double a = spec.a_field ? spec.a_field->at(i, j) : spec.a;
      const double b = spec.b_field ? spec.b_field->at(i, j) : spec.b;
      img.at(i, j) = a + b * std::cos(two_pi_over_q * (carrier + shift));
    }
  }
  return img;
}

}  // namespace lpwave
