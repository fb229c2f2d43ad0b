#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lpwave {

/// Discrete sampling geometry of a rectangular domain.
///
/// Index convention used throughout the library: i is the row index and runs
/// along the y direction, j is the column index and runs along the x
/// direction. Linearized storage is row-major, k = i*cols + j. Indices are
/// 0-based.
struct Grid {
  int rows = 0;      ///< M, number of samples along y
  int cols = 0;      ///< N, number of samples along x
  double hx = 1.0;   ///< sample spacing along x
  double hy = 1.0;   ///< sample spacing along y

  Grid() = default;
  Grid(int rows_, int cols_, double hx_ = 1.0, double hy_ = 1.0)
      : rows(rows_), cols(cols_), hx(hx_), hy(hy_) {
    validate();
  }

  void validate() const {
    if (rows < 2 || cols < 2)
      throw std::invalid_argument("Grid: rows and cols must both be >= 2, got " +
                                  std::to_string(rows) + "x" + std::to_string(cols));
    if (!(hx > 0.0) || !(hy > 0.0))
      throw std::invalid_argument("Grid: spacings must be positive");
  }

  std::size_t cells() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j);
  }

  bool operator==(const Grid& o) const {
    return rows == o.rows && cols == o.cols && hx == o.hx && hy == o.hy;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }
};

/// Real-valued samples on a Grid, stored row-major. Treated as an immutable
/// value once filled; all library operations are pure functions over fields.
struct ScalarField {
  Grid grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0)
      : grid(g), values(g.cells(), fill) {
    g.validate();
  }
  ScalarField(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    g.validate();
    if (values.size() != g.cells())
      throw std::invalid_argument("ScalarField: value count does not match grid");
  }

  double& at(int i, int j) { return values[grid.index(i, j)]; }
  double at(int i, int j) const { return values[grid.index(i, j)]; }

  double mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
  }

  /// Euclidean norm over all cells.
  double norm2() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
  }

  bool all_finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

/// A measured gradient field: the pair of directional-derivative samples
/// (x component, y component) sharing one grid.
struct GradientField {
  Grid grid;
  ScalarField x;  ///< derivative data along x (column direction)
  ScalarField y;  ///< derivative data along y (row direction)

  GradientField() = default;
  explicit GradientField(const Grid& g) : grid(g), x(g), y(g) {}
  GradientField(ScalarField gx, ScalarField gy) : grid(gx.grid), x(std::move(gx)), y(std::move(gy)) {
    if (x.grid != y.grid)
      throw std::invalid_argument("GradientField: components must share one grid");
  }
};

namespace detail {
inline void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}
}  // namespace detail

/// Forward difference along x: out(i,j) = (f(i,j+1) - f(i,j)) / hx for
/// j < cols-1. The last column is stored as exactly 0; it corresponds to the
/// flux term dropped at the boundary and is never consumed downstream.
inline ScalarField forward_diff_x(const ScalarField& f) {
  ScalarField out(f.grid);
  const int m = f.grid.rows, n = f.grid.cols;
  const double inv_h = 1.0 / f.grid.hx;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n - 1; ++j)
      out.at(i, j) = (f.at(i, j + 1) - f.at(i, j)) * inv_h;
    out.at(i, n - 1) = 0.0;
  }
  return out;
}

/// Forward difference along y (acts on the row index); last row is 0.
inline ScalarField forward_diff_y(const ScalarField& f) {
  ScalarField out(f.grid);
  const int m = f.grid.rows, n = f.grid.cols;
  const double inv_h = 1.0 / f.grid.hy;
  for (int i = 0; i < m - 1; ++i)
    for (int j = 0; j < n; ++j)
      out.at(i, j) = (f.at(i + 1, j) - f.at(i, j)) * inv_h;
  for (int j = 0; j < n; ++j) out.at(m - 1, j) = 0.0;
  return out;
}

/// Shifts f by the constant that makes mean(out) equal mean(ref). Used to
/// compare reconstructions that are determined only up to an additive
/// constant.
inline ScalarField mean_align(const ScalarField& f, const ScalarField& ref) {
  detail::require_same_grid(f.grid, ref.grid, "mean_align");
  const double c = ref.mean() - f.mean();
  ScalarField out(f.grid);
  for (std::size_t k = 0; k < f.values.size(); ++k) out.values[k] = f.values[k] + c;
  return out;
}

}  // namespace lpwave
