#pragma once

// Dense reference implementations used to cross-check the sparse kernels.
// Construction routes deliberately differ from the library: the normal
// equations are accumulated edge by edge from the weighted energy, solved
// with a dense pseudoinverse, and weights use std::pow instead of exp/log.

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

#include "lpwave/grid.hpp"
#include "lpwave/system.hpp"

namespace oracle {

inline Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

inline Eigen::MatrixXd dense_from_csr(const lpwave::SparseSystem& s) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(s.n, s.n);
  for (int k = 0; k < s.n; ++k)
    for (int p = s.row_ptr[k]; p < s.row_ptr[k + 1]; ++p) a(k, s.col[p]) += s.val[p];
  return a;
}

// Normal equations of  sum_x U (phi(i,j+1) - phi(i,j) - psi_x)^2
//                    + sum_y V (phi(i+1,j) - phi(i,j) - psi_y)^2,
// accumulated one edge at a time.
inline void dense_system(const lpwave::GradientField& psi, const lpwave::ScalarField& u,
                         const lpwave::ScalarField& v, Eigen::MatrixXd& a, Eigen::VectorXd& b) {
  const int m = psi.grid.rows, n = psi.grid.cols;
  a.setZero(m * n, m * n);
  b.setZero(m * n);
  auto idx = [n](int i, int j) { return i * n + j; };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j + 1 < n; ++j) {
      const double w = u.at(i, j);
      const int k1 = idx(i, j), k2 = idx(i, j + 1);
      a(k1, k1) += w;
      a(k2, k2) += w;
      a(k1, k2) -= w;
      a(k2, k1) -= w;
      const double g = psi.x.at(i, j);
      b(k1) -= w * g;
      b(k2) += w * g;
    }
  for (int i = 0; i + 1 < m; ++i)
    for (int j = 0; j < n; ++j) {
      const double w = v.at(i, j);
      const int k1 = idx(i, j), k2 = idx(i + 1, j);
      a(k1, k1) += w;
      a(k2, k2) += w;
      a(k1, k2) -= w;
      a(k2, k1) -= w;
      const double g = psi.y.at(i, j);
      b(k1) -= w * g;
      b(k2) += w * g;
    }
}

// Minimum-norm solve of the singular normal equations, shifted to zero mean.
inline Eigen::VectorXd dense_solve_zero_mean(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  Eigen::VectorXd x = cod.solve(b);
  x.array() -= x.mean();
  return x;
}

// IRLS with exact dense inner solves, run for a fixed number of sweeps.
inline lpwave::ScalarField dense_irls(const lpwave::GradientField& psi, double p, double eps,
                                      const lpwave::ScalarField& phi0, int sweeps) {
  const int m = psi.grid.rows, n = psi.grid.cols;
  Eigen::VectorXd phi = to_eigen(phi0.values);
  auto idx = [n](int i, int j) { return i * n + j; };
  auto weight = [p, eps](double r) {
    if (r == 0.0) return 1.0;
    return eps / (std::pow(std::fabs(r), 2.0 - p) + eps);
  };
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  for (int s = 0; s < sweeps; ++s) {
    lpwave::ScalarField u(psi.grid), v(psi.grid);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j + 1 < n; ++j)
        u.at(i, j) = weight(phi(idx(i, j + 1)) - phi(idx(i, j)) - psi.x.at(i, j));
    for (int i = 0; i + 1 < m; ++i)
      for (int j = 0; j < n; ++j)
        v.at(i, j) = weight(phi(idx(i + 1, j)) - phi(idx(i, j)) - psi.y.at(i, j));
    dense_system(psi, u, v, a, b);
    phi = dense_solve_zero_mean(a, b);
  }
  lpwave::ScalarField out(psi.grid);
  out.values = to_std(phi);
  return out;
}

// Deterministic random inputs for property tests; independent of the
// library's counter-based generator.
inline lpwave::ScalarField random_field(const lpwave::Grid& g, std::mt19937_64& rng,
                                        double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  lpwave::ScalarField f(g);
  for (double& x : f.values) x = dist(rng);
  return f;
}

// Weights in (0,1] with the boundary column/row zeroed per convention.
inline void random_weights(const lpwave::Grid& g, std::mt19937_64& rng, lpwave::ScalarField& u,
                           lpwave::ScalarField& v) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  u = lpwave::ScalarField(g);
  v = lpwave::ScalarField(g);
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols - 1; ++j) u.at(i, j) = 1.0 - dist(rng);
  for (int i = 0; i < g.rows - 1; ++i)
    for (int j = 0; j < g.cols; ++j) v.at(i, j) = 1.0 - dist(rng);
}

inline lpwave::GradientField random_gradient(const lpwave::Grid& g, std::mt19937_64& rng) {
  lpwave::GradientField psi(g);
  psi.x = random_field(g, rng);
  psi.y = random_field(g, rng);
  for (int i = 0; i < g.rows; ++i) psi.x.at(i, g.cols - 1) = 0.0;
  for (int j = 0; j < g.cols; ++j) psi.y.at(g.rows - 1, j) = 0.0;
  return psi;
}

// Exactly integrable gradient: unit-spacing forward differences of a field.
inline lpwave::GradientField integrable_gradient(const lpwave::ScalarField& truth) {
  lpwave::Grid unit(truth.grid.rows, truth.grid.cols, 1.0, 1.0);
  lpwave::ScalarField f(unit, truth.values);
  return lpwave::GradientField(lpwave::forward_diff_x(f), lpwave::forward_diff_y(f));
}

}  // namespace oracle
