#pragma once

#include "qhelper/rates.hpp"

namespace qhelper::region {

struct FrontierConfig {
  int dim_c = 2;
  int dim_e = 2;
  std::vector<double> lambda_grid = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 64.0};
  int restarts = 8;
  std::uint64_t seed = 0;
  int max_iters = 300;
  double step_tol = 1e-6;
  double obj_tol = 1e-10;

  void validate() const;  // grid nonempty/sorted/nonnegative, positive counts
};

struct FrontierPoint {
  double lambda = 0.0;
  rates::RatePoint point;
  bool converged = false;
  int iters = 0;
};

// `points` holds one entry per lambda in grid order; `hull` indexes the
// subset forming the lower convex boundary, sorted by r2 ascending with
// r1 strictly decreasing (the achievable region is up-closed, so the
// staircase plus time-sharing hull is the frontier).
struct FrontierResult {
  std::vector<FrontierPoint> points;
  std::vector<int> hull;

  const FrontierPoint& hull_point(int k) const { return points[hull[k]]; }
  int hull_size() const { return static_cast<int>(hull.size()); }
};

/// J = r2 + lambda * r1 evaluated through build_phi and rate_pair.
double scalarized_objective(const DensityOperator& rho_ab, const ChannelParams& params,
                            double lambda);

/// Derivative-free descent (coordinate pattern search with shrinking
/// step plus a few random directions per sweep) from `restarts`
/// deterministic starts; returns the best point. Non-convergence is
/// reported via the converged flag, never as a failure.
FrontierPoint minimize(const DensityOperator& rho_ab, double lambda,
                       const FrontierConfig& cfg, int lambda_index = 0);

/// One minimize call per lambda followed by the staircase + lower convex
/// hull pass. `threads` 0 picks min(hardware, grid size); results are
/// merged by grid index so the output is independent of scheduling.
FrontierResult trace_frontier(const DensityOperator& rho_ab, const FrontierConfig& cfg,
                              int threads = 0);

/// Frontier value r1 at a given r2: piecewise-linear interpolation along
/// the hull, clamped to the endpoint values outside its r2 range.
double hull_r1_at(const FrontierResult& result, double r2);

}  // namespace qhelper::region
