#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lpwave/grid.hpp"
#include "lpwave/weights.hpp"

namespace lpwave {

/// Sparse symmetric linear system A phi = b on the 5-point stencil.
///
/// A is a weighted graph Laplacian: horizontal edge (i,j)-(i,j+1) carries
/// weight U(i,j), vertical edge (i,j)-(i+1,j) carries weight V(i,j). Row k of
/// A has the diagonal U(i,j-1)+U(i,j)+V(i-1,j)+V(i,j) and off-diagonals minus
/// those weights toward the four neighbors, with out-of-range terms dropped.
/// Unknowns are linearized row-major, k = i*cols + j.
///
/// Storage is compressed-row with the symbolic pattern (row offsets, column
/// indices, diagonal positions) built once per grid; reassembly rewrites only
/// the numeric values. Columns within a row are sorted ascending.
struct SparseSystem {
  Grid grid;
  int n = 0;                     ///< dimension, rows*cols
  std::vector<int> row_ptr;      ///< size n+1
  std::vector<int> col;          ///< size nnz
  std::vector<int> diag_pos;     ///< per-row value index of the diagonal entry
  std::vector<double> val;       ///< numeric values, rewritten each assembly
  std::vector<double> rhs;       ///< right-hand side b

  /// y = A x (no allocation).
  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
      throw std::invalid_argument("SparseSystem::apply: dimension mismatch");
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int p = row_ptr[k]; p < row_ptr[k + 1]; ++p) s += val[p] * x[col[p]];
      y[k] = s;
    }
  }

  std::vector<double> apply(const std::vector<double>& x) const {
    std::vector<double> y(static_cast<std::size_t>(n));
    apply(x, y);
    return y;
  }
};

/// Builds the symbolic 5-point pattern for a grid; values and rhs start at 0.
inline SparseSystem make_system(const Grid& grid) {
  grid.validate();
  const int m = grid.rows, n = grid.cols;
  const std::size_t cells = grid.cells();
  if (cells > static_cast<std::size_t>(1) << 31)
    throw std::invalid_argument("make_system: grid too large for 32-bit indexing");

  SparseSystem sys;
  sys.grid = grid;
  sys.n = static_cast<int>(cells);
  sys.row_ptr.assign(cells + 1, 0);
  sys.diag_pos.assign(cells, 0);
  sys.col.reserve(cells * 5);

  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      const int k = i * n + j;
      if (i > 0) sys.col.push_back(k - n);
      if (j > 0) sys.col.push_back(k - 1);
      sys.diag_pos[static_cast<std::size_t>(k)] = static_cast<int>(sys.col.size());
      sys.col.push_back(k);
      if (j < n - 1) sys.col.push_back(k + 1);
      if (i < m - 1) sys.col.push_back(k + n);
      sys.row_ptr[static_cast<std::size_t>(k) + 1] = static_cast<int>(sys.col.size());
    }
  }
  sys.val.assign(sys.col.size(), 0.0);
  sys.rhs.assign(cells, 0.0);
  return sys;
}

/// Rewrites the numeric values and right-hand side of a system built by
/// make_system from the current weights and the measured gradient field.
///
/// Boundary handling needs no branches beyond index-range drops: the weight
/// fields already carry zeros on the dropped boundary column/row.
inline void assemble(SparseSystem& sys, const GradientField& psi, const ScalarField& u,
                     const ScalarField& v) {
  detail::require_same_grid(sys.grid, psi.grid, "assemble");
  detail::require_same_grid(sys.grid, u.grid, "assemble");
  detail::require_same_grid(sys.grid, v.grid, "assemble");
  const int m = sys.grid.rows, n = sys.grid.cols;

  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      const int k = i * n + j;
      const double wl = (j > 0) ? u.at(i, j - 1) : 0.0;   // toward (i, j-1)
      const double wr = u.at(i, j);                       // toward (i, j+1); 0 at j = n-1
      const double wu = (i > 0) ? v.at(i - 1, j) : 0.0;   // toward (i-1, j)
      const double wd = v.at(i, j);                       // toward (i+1, j); 0 at i = m-1

      int p = sys.row_ptr[k];
      if (i > 0) sys.val[p++] = -wu;
      if (j > 0) sys.val[p++] = -wl;
      sys.val[p++] = wl + wr + wu + wd;
      if (j < n - 1) sys.val[p++] = -wr;
      if (i < m - 1) sys.val[p++] = -wd;

      double b = -psi.x.at(i, j) * wr - psi.y.at(i, j) * wd;
      if (j > 0) b += psi.x.at(i, j - 1) * wl;
      if (i > 0) b += psi.y.at(i - 1, j) * wu;
      sys.rhs[static_cast<std::size_t>(k)] = b;
    }
  }
}

inline SparseSystem assemble(const GradientField& psi, const ScalarField& u,
                             const ScalarField& v) {
  SparseSystem sys = make_system(psi.grid);
  assemble(sys, psi, u, v);
  return sys;
}

}  // namespace lpwave
