#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lpwave/system.hpp"
#include "lpwave/vecops.hpp"

namespace lpwave {

/// Inner-solver controls. Zero-valued limits are resolved per system size:
/// l_max defaults to floor(1.5 * n) and restart_period to floor(sqrt(n)),
/// where n = rows * cols. kappa is the relative residual-energy tolerance:
/// the iteration stops once delta_new <= kappa^2 * delta_0.
struct PcgParams {
  long l_max = 0;
  double kappa = 0.005;
  long restart_period = 0;

  long resolved_l_max(int n) const {
    const long v = l_max > 0 ? l_max : static_cast<long>(1.5 * static_cast<double>(n));
    if (v < 1) throw std::invalid_argument("PcgParams: l_max must be >= 1");
    return v;
  }
  long resolved_restart(int n) const {
    const long v =
        restart_period > 0 ? restart_period : static_cast<long>(std::sqrt(static_cast<double>(n)));
    return v < 1 ? 1 : v;
  }
  void validate() const {
    if (!(kappa > 0.0 && kappa < 1.0)) throw std::invalid_argument("PcgParams: kappa must be in (0,1)");
  }
};

/// Incomplete-LU(0) factors restricted to the system's 5-point pattern, or a
/// diagonal (Jacobi) fallback when the factorization breaks down. Applying
/// the preconditioner is two triangular solves (L unit lower, U upper).
struct Preconditioner {
  enum class Kind { ilu0, jacobi };
  Kind kind = Kind::ilu0;
  std::vector<double> luv;       ///< factor values on A's pattern (ilu0)
  std::vector<double> inv_diag;  ///< reciprocal diagonal (jacobi)
};

/// ILU(0) factorization. Pivots smaller in magnitude than
/// 1e-12 * max(diag A) are replaced by that threshold; A is singular by
/// construction (constant null space), so an occasional tiny pivot is
/// expected and only the preconditioner quality is at stake. Returns false on
/// breakdown (no usable positive threshold), in which case the caller should
/// fall back to Jacobi.
inline bool build_ilu0(const SparseSystem& a, Preconditioner& out) {
  const int n = a.n;
  double max_diag = 0.0;
  for (int k = 0; k < n; ++k) {
    const double d = a.val[a.diag_pos[k]];
    if (std::fabs(d) > max_diag) max_diag = std::fabs(d);
  }
  if (!(max_diag > 0.0) || !std::isfinite(max_diag)) return false;
  const double pivot_floor = 1e-12 * max_diag;

  out.kind = Preconditioner::Kind::ilu0;
  out.luv = a.val;
  out.inv_diag.clear();
  std::vector<double>& lu = out.luv;

  for (int i = 0; i < n; ++i) {
    const int dpos = a.diag_pos[i];
    for (int p = a.row_ptr[i]; p < dpos; ++p) {
      const int k = a.col[p];
      lu[p] /= lu[a.diag_pos[k]];
      const double lik = lu[p];
      // subtract lik * (U-part of row k), keeping only entries inside row i's pattern
      for (int q = a.diag_pos[k] + 1; q < a.row_ptr[k + 1]; ++q) {
        const int c = a.col[q];
        for (int t = p + 1; t < a.row_ptr[i + 1]; ++t) {
          if (a.col[t] == c) {
            lu[t] -= lik * lu[q];
            break;
          }
        }
      }
    }
    if (!std::isfinite(lu[dpos])) return false;
    if (std::fabs(lu[dpos]) < pivot_floor) lu[dpos] = pivot_floor;
  }
  return true;
}

/// Jacobi preconditioner; zero diagonal entries act as identity.
inline void build_jacobi(const SparseSystem& a, Preconditioner& out) {
  out.kind = Preconditioner::Kind::jacobi;
  out.luv.clear();
  out.inv_diag.assign(static_cast<std::size_t>(a.n), 1.0);
  for (int k = 0; k < a.n; ++k) {
    const double d = a.val[a.diag_pos[k]];
    if (d > 0.0 && std::isfinite(d)) out.inv_diag[static_cast<std::size_t>(k)] = 1.0 / d;
  }
}

/// ILU(0) with Jacobi fallback on breakdown.
inline Preconditioner build_preconditioner(const SparseSystem& a) {
  Preconditioner m;
  if (!build_ilu0(a, m)) build_jacobi(a, m);
  return m;
}

/// z = M^{-1} r via forward then backward triangular solve (ilu0), or a
/// diagonal scaling (jacobi).
inline void apply_preconditioner(const SparseSystem& a, const Preconditioner& m,
                                 const std::vector<double>& r, std::vector<double>& z) {
  const int n = a.n;
  if (m.kind == Preconditioner::Kind::jacobi) {
    for (int k = 0; k < n; ++k) z[k] = r[k] * m.inv_diag[static_cast<std::size_t>(k)];
    return;
  }
  // L y = r, L unit lower triangular
  for (int k = 0; k < n; ++k) {
    double s = r[k];
    const int dpos = a.diag_pos[k];
    for (int p = a.row_ptr[k]; p < dpos; ++p) s -= m.luv[p] * z[a.col[p]];
    z[k] = s;
  }
  // U x = y
  for (int k = n - 1; k >= 0; --k) {
    double s = z[k];
    const int dpos = a.diag_pos[k];
    for (int p = dpos + 1; p < a.row_ptr[k + 1]; ++p) s -= m.luv[p] * z[a.col[p]];
    z[k] = s / m.luv[dpos];
  }
}

enum class PcgStatus { converged, iter_limit, breakdown };

struct PcgResult {
  std::vector<double> x;
  long iters = 0;
  bool converged = false;
  PcgStatus status = PcgStatus::iter_limit;
  double delta0 = 0.0;        ///< initial residual energy r' M^{-1} r
  double delta_final = 0.0;   ///< last recurrence value of delta_new
  double delta_exact = 0.0;   ///< energy of the recomputed exact final residual
  std::vector<double> restart_deltas;  ///< delta_new at each exact-residual recomputation
};

/// Preconditioned conjugate gradient on a symmetric positive semidefinite
/// system with consistent right-hand side.
///
/// The residual recurrence is replaced by an exact recomputation
/// r = b - A x whenever the iteration counter is divisible by
/// restart_period, and the loop exits once delta_new <= kappa^2 * delta_0 or
/// the iteration cap is reached. delta_0 <= 0 is an immediate-convergence
/// exit with zero iterations.
///
/// A second, absolute stop handles iterates that already solve the system to
/// machine precision (warm starts, zero right-hand sides): whenever the exact
/// residual is available, the solve is declared converged if the normwise
/// backward error ||r|| / (||b|| + ||A|| ||x||) is below 1e-13, a level no
/// Krylov iteration can improve on. Without it the relative kappa target is
/// unreachable from such starts and the loop would grind to l_max. A
/// non-positive curvature d'Ad or a non-finite energy aborts with status
/// breakdown, returning the last iterate, unless that same floor test shows
/// the iterate is already a machine-precision solution.
inline PcgResult pcg_solve(const SparseSystem& a, const Preconditioner& m,
                           const std::vector<double>& x0, const PcgParams& params) {
  params.validate();
  const int n = a.n;
  if (static_cast<int>(x0.size()) != n)
    throw std::invalid_argument("pcg_solve: x0 dimension mismatch");
  const long l_max = params.resolved_l_max(n);
  const long restart = params.resolved_restart(n);
  const double kappa2 = params.kappa * params.kappa;
  constexpr double kFloorRel = 1e-13;

  PcgResult res;
  res.x = x0;
  std::vector<double> r(static_cast<std::size_t>(n)), d(static_cast<std::size_t>(n)),
      q(static_cast<std::size_t>(n)), s(static_cast<std::size_t>(n));

  double norm_a = 0.0;  // infinity norm: max absolute row sum
  for (int k = 0; k < n; ++k) {
    double row = 0.0;
    for (int p = a.row_ptr[k]; p < a.row_ptr[k + 1]; ++p) row += std::fabs(a.val[p]);
    if (row > norm_a) norm_a = row;
  }
  const double norm_b = std::sqrt(dot(a.rhs, a.rhs));
  const auto at_floor = [&](const std::vector<double>& resid) {
    return std::sqrt(dot(resid, resid)) <=
           kFloorRel * (norm_b + norm_a * std::sqrt(dot(res.x, res.x)));
  };

  a.apply(res.x, q);
  for (int k = 0; k < n; ++k) r[k] = a.rhs[k] - q[k];
  apply_preconditioner(a, m, r, d);
  double delta_new = dot(r, d);
  res.delta0 = delta_new;

  auto finish = [&](PcgStatus st, long iters) {
    res.status = st;
    res.converged = (st == PcgStatus::converged);
    res.iters = iters;
    res.delta_final = delta_new;
    a.apply(res.x, q);
    for (int k = 0; k < n; ++k) r[k] = a.rhs[k] - q[k];
    apply_preconditioner(a, m, r, s);
    res.delta_exact = dot(r, s);
    return res;
  };

  if (!std::isfinite(delta_new)) return finish(PcgStatus::breakdown, 0);
  if (delta_new <= 0.0) return finish(PcgStatus::converged, 0);
  if (at_floor(r)) return finish(PcgStatus::converged, 0);

  long l = 0;
  while (l < l_max && delta_new > kappa2 * res.delta0) {
    a.apply(d, q);
    const double dtq = dot(d, q);
    if (!(dtq > 0.0) || !std::isfinite(dtq)) {
      a.apply(res.x, q);
      for (int k = 0; k < n; ++k) r[k] = a.rhs[k] - q[k];
      return finish(at_floor(r) ? PcgStatus::converged : PcgStatus::breakdown, l);
    }
    const double alpha = delta_new / dtq;
    axpy(alpha, d, res.x);

    const bool exact = (l % restart == 0);
    if (exact) {
      a.apply(res.x, q);
      for (int k = 0; k < n; ++k) r[k] = a.rhs[k] - q[k];
    } else {
      axpy(-alpha, q, r);
    }
    apply_preconditioner(a, m, r, s);
    const double delta_old = delta_new;
    delta_new = dot(r, s);
    if (!std::isfinite(delta_new)) return finish(PcgStatus::breakdown, l + 1);
    if (exact) {
      res.restart_deltas.push_back(delta_new);
      if (at_floor(r)) return finish(PcgStatus::converged, l + 1);
    }
    const double beta = delta_new / delta_old;
    xpby(s, beta, d);
    ++l;
  }
  return finish(delta_new <= kappa2 * res.delta0 ? PcgStatus::converged : PcgStatus::iter_limit, l);
}

/// Convenience overload: builds the ILU(0) preconditioner (Jacobi fallback)
/// from the system and solves.
inline PcgResult pcg_solve(const SparseSystem& a, const std::vector<double>& x0,
                           const PcgParams& params) {
  const Preconditioner m = build_preconditioner(a);
  return pcg_solve(a, m, x0, params);
}

}  // namespace lpwave
