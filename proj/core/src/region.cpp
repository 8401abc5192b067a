#include "qhelper/region.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "qhelper/errors.hpp"
#include "qhelper/tolerances.hpp"

namespace qhelper::region {

void FrontierConfig::validate() const {
  if (dim_c < 1 || dim_e < 1) throw ValidationError("frontier config: dims must be >= 1");
  if (lambda_grid.empty()) throw ValidationError("frontier config: empty lambda grid");
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (lambda_grid[i] < 0.0 || !std::isfinite(lambda_grid[i]))
      throw ValidationError("frontier config: lambdas must be finite and >= 0");
    if (i > 0 && lambda_grid[i] < lambda_grid[i - 1])
      throw ValidationError("frontier config: lambda grid must be ascending");
  }
  if (restarts < 1) throw ValidationError("frontier config: restarts must be >= 1");
  if (max_iters < 1) throw ValidationError("frontier config: max_iters must be >= 1");
  if (step_tol <= 0.0 || obj_tol <= 0.0)
    throw ValidationError("frontier config: tolerances must be positive");
}

namespace {

// Shared per-source context: the purification is fixed, only the helper
// isometry varies during the search.
struct Objective {
  PureState psi_abr;
  int dim_b;
  int dim_c;
  int dim_e;
  double lambda;

  rates::RatePoint rates_at(const ChannelParams& p) const {
    const StinespringIsometry v = params_to_isometry(p);
    const PureState phi = apply_isometry(psi_abr, v, "B", "C", "E");
    const double r1 = cond_entropy(phi, {"A"}, {"C"});
    const double r2 = 0.5 * mutual_info(phi, {"R", "A"}, {"C"});
    return rates::RatePoint(r1, r2);
  }

  double eval(const ChannelParams& p) const {
    const rates::RatePoint rp = rates_at(p);
    return rp.r2 + lambda * rp.r1;
  }
};

struct SearchOutcome {
  ChannelParams params;
  double value = 0.0;
  int iters = 0;
  bool converged = false;
};

SearchOutcome pattern_search(const Objective& obj, ChannelParams theta,
                             const FrontierConfig& cfg, Rng& rng) {
  const int n = static_cast<int>(theta.theta.size());
  double step = 0.5;
  double value = obj.eval(theta);
  int iters = 0;
  bool converged = false;

  ChannelParams cand = theta;
  while (iters < cfg.max_iters) {
    ++iters;
    double best_value = value;
    ChannelParams best = theta;

    for (int i = 0; i < n; ++i) {
      for (const double delta : {step, -step}) {
        cand = theta;
        cand.theta[i] += delta;
        const double v = obj.eval(cand);
        if (v < best_value) {
          best_value = v;
          best = cand;
        }
      }
    }
    // Two random directions guard against coordinate-axis stalls.
    for (int probe = 0; probe < 2; ++probe) {
      cand = theta;
      double norm2 = 0.0;
      std::vector<double> dir(n);
      for (int i = 0; i < n; ++i) {
        dir[i] = rng.gaussian();
        norm2 += dir[i] * dir[i];
      }
      const double scale = step / std::sqrt(std::max(norm2, 1e-300));
      for (int i = 0; i < n; ++i) cand.theta[i] += scale * dir[i];
      const double v = obj.eval(cand);
      if (v < best_value) {
        best_value = v;
        best = cand;
      }
    }

    if (best_value < value) {
      const double improvement = value - best_value;
      theta = best;
      value = best_value;
      if (improvement < cfg.obj_tol) {
        converged = true;
        break;
      }
    } else {
      step *= 0.5;
      if (step < cfg.step_tol) {
        converged = true;
        break;
      }
    }
  }
  return {std::move(theta), value, iters, converged};
}

}  // namespace

double scalarized_objective(const DensityOperator& rho_ab, const ChannelParams& params,
                            double lambda) {
  const rates::HelperInstance inst(rho_ab, params_to_isometry(params));
  const rates::RatePoint rp = rates::rate_pair(rates::build_phi(inst));
  return rp.r2 + lambda * rp.r1;
}

namespace {

FrontierPoint minimize_impl(const Objective& obj, const FrontierConfig& cfg,
                            int lambda_index) {
  const int n_params = (obj.dim_c * obj.dim_e) * (obj.dim_c * obj.dim_e);
  SearchOutcome best;
  bool have_best = false;

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(lambda_index), restart));
    ChannelParams start = ChannelParams::zeros(obj.dim_b, obj.dim_c, obj.dim_e);
    if (restart > 0) {
      for (int i = 0; i < n_params; ++i) start.theta[i] = 0.8 * rng.gaussian();
    }
    SearchOutcome out = pattern_search(obj, std::move(start), cfg, rng);
    if (!have_best || out.value < best.value) {
      best = std::move(out);
      have_best = true;
    }
  }

  FrontierPoint fp;
  fp.lambda = obj.lambda;
  fp.converged = best.converged;
  fp.iters = best.iters;
  rates::RatePoint rp = obj.rates_at(best.params);
  rp.params = std::move(best.params);
  fp.point = std::move(rp);
  return fp;
}

Objective make_objective(const DensityOperator& rho_ab, const FrontierConfig& cfg,
                         double lambda) {
  const int dim_b = rho_ab.layout().dim_of("B");
  if (cfg.dim_c * cfg.dim_e < dim_b)
    throw DimensionError("frontier: dim_c * dim_e = " +
                         std::to_string(cfg.dim_c * cfg.dim_e) +
                         " cannot carry helper input of dim " + std::to_string(dim_b));
  return Objective{purify(rho_ab, "R"), dim_b, cfg.dim_c, cfg.dim_e, lambda};
}

}  // namespace

FrontierPoint minimize(const DensityOperator& rho_ab, double lambda,
                       const FrontierConfig& cfg, int lambda_index) {
  cfg.validate();
  return minimize_impl(make_objective(rho_ab, cfg, lambda), cfg, lambda_index);
}

FrontierResult trace_frontier(const DensityOperator& rho_ab, const FrontierConfig& cfg,
                              int threads) {
  cfg.validate();
  const int n = static_cast<int>(cfg.lambda_grid.size());
  FrontierResult result;
  result.points.resize(n);

  const Objective base = make_objective(rho_ab, cfg, 0.0);
  auto run_one = [&](int i) {
    Objective obj = base;
    obj.lambda = cfg.lambda_grid[i];
    result.points[i] = minimize_impl(obj, cfg, i);
  };

  int nthreads = threads > 0 ? threads
                             : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::max(1, std::min(nthreads, n));
  if (nthreads == 1) {
    for (int i = 0; i < n; ++i) run_one(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
          try {
            run_one(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  // Staircase: sort by r2, keep strict r1 descents (dominated points out).
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto &pa = result.points[a].point, &pb = result.points[b].point;
    if (pa.r2 != pb.r2) return pa.r2 < pb.r2;
    return pa.r1 < pb.r1;
  });
  std::vector<int> stair;
  for (int idx : order) {
    const auto& p = result.points[idx].point;
    if (stair.empty() || p.r1 < result.points[stair.back()].point.r1 - 1e-12)
      stair.push_back(idx);
  }

  // Lower convex hull over the staircase (time-sharing).
  std::vector<int> hull;
  auto cross = [&](int ia, int ib, int ic) {
    const auto &a = result.points[ia].point, &b = result.points[ib].point,
               &c = result.points[ic].point;
    return (b.r2 - a.r2) * (c.r1 - a.r1) - (b.r1 - a.r1) * (c.r2 - a.r2);
  };
  for (int idx : stair) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), idx) <= 0.0)
      hull.pop_back();
    hull.push_back(idx);
  }
  result.hull = std::move(hull);
  return result;
}

double hull_r1_at(const FrontierResult& result, double r2) {
  if (result.hull.empty()) throw ValidationError("hull_r1_at: empty hull");
  const auto pt = [&](int k) -> const rates::RatePoint& {
    return result.points[result.hull[k]].point;
  };
  const int m = result.hull_size();
  if (r2 <= pt(0).r2) return pt(0).r1;
  if (r2 >= pt(m - 1).r2) return pt(m - 1).r1;
  for (int k = 1; k < m; ++k) {
    if (r2 <= pt(k).r2) {
      const double x0 = pt(k - 1).r2, x1 = pt(k).r2;
      const double y0 = pt(k - 1).r1, y1 = pt(k).r1;
      const double t = (r2 - x0) / (x1 - x0);
      return y0 + t * (y1 - y0);
    }
  }
  return pt(m - 1).r1;
}

}  // namespace qhelper::region
