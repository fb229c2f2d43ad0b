#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lpwave/grid.hpp"
#include "lpwave/pcg.hpp"
#include "lpwave/rng.hpp"
#include "lpwave/system.hpp"
#include "lpwave/vecops.hpp"
#include "lpwave/weights.hpp"

namespace lpwave {

enum class InitMode { random, zero };

/// Outer-loop controls for the reweighted integration.
struct IntegrationParams {
  double p = 1.0;          ///< norm exponent; must be < 2 for integrate()
  double epsilon = 0.1;    ///< weight normalizer
  int k_max = 100;         ///< max outer iterations
  double tol = 1e-3;       ///< relative-change stopping tolerance
  PcgParams pcg;
  std::uint64_t seed = 1;  ///< drives the random initializer
  InitMode init = InitMode::random;
  /// Optional starting iterate; overrides init/seed when set.
  std::optional<ScalarField> initial;

  void validate() const {
    if (k_max < 1) throw std::invalid_argument("IntegrationParams: k_max must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("IntegrationParams: tol must be > 0");
    pcg.validate();
  }
};

enum class SolveStatus { converged, kmax_exhausted, breakdown };

struct OuterIterStats {
  long inner_iters = 0;
  double rel_change = 0.0;
  double delta0 = 0.0;       ///< inner solve's initial residual energy
  double delta_exact = 0.0;  ///< inner solve's recomputed final residual energy
  bool pcg_converged = false;
};

/// Convergence telemetry of one integration run.
struct SolveReport {
  int outer_iters = 0;
  long total_inner_iters = 0;
  double final_rel_change = 0.0;
  std::vector<OuterIterStats> trace;
  double wall_seconds = 0.0;
  SolveStatus status = SolveStatus::kmax_exhausted;
  int breakdown_outer = -1;  ///< outer index at which a breakdown occurred, else -1

  bool converged() const { return status == SolveStatus::converged; }
};

namespace detail {

inline ScalarField initial_iterate(const Grid& grid, const IntegrationParams& prm) {
  if (prm.initial) {
    require_same_grid(prm.initial->grid, grid, "integrate initial guess");
    return *prm.initial;
  }
  ScalarField phi(grid);
  if (prm.init == InitMode::random) {
    for (std::size_t k = 0; k < phi.values.size(); ++k)
      phi.values[k] = rng::uniform01(prm.seed, rng::kStreamInit, k);
  }
  return phi;
}

/// ||next - prev|| / ||prev||; falls back to the absolute change when the
/// denominator vanishes (and to 0 when both iterates coincide).
inline double relative_change(const std::vector<double>& next, const std::vector<double>& prev) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < next.size(); ++k) {
    const double d = next[k] - prev[k];
    num += d * d;
    den += prev[k] * prev[k];
  }
  num = std::sqrt(num);
  den = std::sqrt(den);
  if (den == 0.0) return num;  // 0 when next == prev, else absolute change
  return num / den;
}

inline void subtract_mean(ScalarField& f) {
  const double c = f.mean();
  for (double& v : f.values) v -= c;
}

/// Shared outer loop. Weights are either recomputed from the current iterate
/// (reweighted path) or held constant (least-squares baseline).
inline std::pair<ScalarField, SolveReport> run_outer_loop(const GradientField& psi,
                                                          const IntegrationParams& prm,
                                                          bool reweighted) {
  const auto t0 = std::chrono::steady_clock::now();
  psi.grid.validate();
  ScalarField phi = initial_iterate(psi.grid, prm);

  SparseSystem sys = make_system(psi.grid);
  WeightPair w = constant_weights(psi.grid, prm.epsilon);

  SolveReport report;
  double error = std::numeric_limits<double>::infinity();

  for (int k = 0; k < prm.k_max && error > prm.tol; ++k) {
    if (reweighted) w = compute_weights(phi, psi, {prm.p, prm.epsilon});
    assemble(sys, psi, w.u, w.v);
    const Preconditioner m = build_preconditioner(sys);
    PcgResult inner = pcg_solve(sys, m, phi.values, prm.pcg);

    error = relative_change(inner.x, phi.values);
    phi.values = std::move(inner.x);
    report.trace.push_back({inner.iters, error, inner.delta0, inner.delta_exact, inner.converged});
    report.total_inner_iters += inner.iters;
    report.outer_iters = k + 1;
    report.final_rel_change = error;

    if (inner.status == PcgStatus::breakdown) {
      report.status = SolveStatus::breakdown;
      report.breakdown_outer = k;
      break;
    }
  }
  if (report.status != SolveStatus::breakdown)
    report.status = error <= prm.tol ? SolveStatus::converged : SolveStatus::kmax_exhausted;

  subtract_mean(phi);  // canonical zero-mean gauge
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(phi), report};
}

}  // namespace detail

/// Integrates a measured gradient field (cell-unit differences) into a
/// wavefront by iteratively reweighted least squares: alternate weight
/// computation, 5-point system assembly, and an ILU(0)-preconditioned CG
/// solve, until the relative change of the iterate drops to tol or k_max is
/// reached. The returned field has zero mean; the additive constant is not
/// observable from gradient data.
///
/// Requires p < 2; the p = 2 baseline is integrate_least_squares().
inline std::pair<ScalarField, SolveReport> integrate(const GradientField& psi,
                                                     const IntegrationParams& params) {
  params.validate();
  if (!(params.p < 2.0))
    throw std::invalid_argument("integrate: requires p < 2 (use integrate_least_squares for p = 2)");
  WeightParams{params.p, params.epsilon}.validate();
  return detail::run_outer_loop(psi, params, /*reweighted=*/true);
}

/// Least-squares baseline: the outer loop run with the constant weights
/// epsilon/(1+epsilon), which is exactly the p = 2 case of the weight
/// expression (residual-independent), so successive warm-started solves
/// sharpen the same system until the iterate stabilizes. Equivalent to
/// unweighted least-squares integration (the uniform factor cancels in
/// A phi = b).
inline std::pair<ScalarField, SolveReport> integrate_least_squares(const GradientField& psi,
                                                                   const IntegrationParams& params) {
  params.validate();
  WeightParams{2.0, params.epsilon}.validate();
  return detail::run_outer_loop(psi, params, /*reweighted=*/false);
}

}  // namespace lpwave
