#include "cachenet/primal_dual.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace cachenet {

StrategyPair primal_step(const ObjectiveContext& ctx, const StrategyPair& y_t,
                         const DualVector& psi_t, int t, const PDConfig& config) {
  FWConfig fw = config.fw;
  fw.threads = config.threads;
  const StrategyPair y_fw = frank_wolfe_variant(ctx, psi_t, fw).y;

  const double alpha = config.momentum ? 2.0 / (t + 2.0) : 1.0;
  if (alpha == 1.0 || (y_fw.xi == y_t.xi && y_fw.rho_tilde == y_t.rho_tilde)) return y_fw;

  StrategyPair y;
  y.xi = (alpha * y_fw.xi + (1.0 - alpha) * y_t.xi).cwiseMax(0.0).cwiseMin(1.0);
  y.rho_tilde =
      (alpha * y_fw.rho_tilde + (1.0 - alpha) * y_t.rho_tilde).cwiseMax(0.0).cwiseMin(1.0);
  return y;
}

DualVector dual_step(const ObjectiveContext& ctx, const StrategyPair& y_next,
                     const DualVector& psi_t, int t, const PDConfig& config) {
  const double beta =
      config.dual_step_scale / std::sqrt(static_cast<double>(std::max(t, 1)));
  DualVector psi;
  psi.psi = (psi_t.psi + beta * overflows(ctx, y_next)).cwiseMax(0.0);
  return psi;
}

RunReport run_primal_dual(const NetworkInstance& instance, const DemandModel& demand,
                          const PDConfig& config) {
  const ObjectiveContext ctx(instance, demand);
  return run_primal_dual(ctx, config);
}

RunReport run_primal_dual(const ObjectiveContext& ctx, const PDConfig& config) {
  const auto t_start = std::chrono::steady_clock::now();

  RunReport report;
  report.algorithm = "primaldual";

  PDConfig cfg = config;
  DualVector psi = DualVector::zeros(ctx.instance());

  // The start point is erased by alpha_0 = 1; any exactly feasible point
  // works. Use the zero-multiplier oracle vertex, bound into the equality set.
  StrategyPair y =
      bind_routing(ctx, lmo(ctx, gradient(ctx, StrategyPair::zeros(ctx.instance(), ctx.demand()), psi, cfg.threads)), psi);

  double prev_gain = 0.0;
  for (int t = 0; t < cfg.max_iterations; ++t) {
    y = primal_step(ctx, y, psi, t, cfg);
    if (cfg.validate_iterates &&
        !validate_strategy(ctx.instance(), ctx.demand(), y, FeasibleSet::D).pass()) {
      report.iterates_in_feasible_set = false;
      report.events.push_back("iterate left the feasible set at t=" + std::to_string(t));
    }

    if (t == 0 && cfg.dual_step_scale <= 0.0) {
      // Calibrate the dual scale on the first primal iterate so that the
      // Lagrangian starts out positive.
      const Vec g = overflows(ctx, y);
      const double excess = g.cwiseMax(0.0).sum();
      cfg.dual_step_scale = cache_gain(ctx, y) / (excess + 1e-9);
      std::ostringstream os;
      os << "dual scale calibrated to " << cfg.dual_step_scale;
      report.events.push_back(os.str());
    }

    psi = dual_step(ctx, y, psi, t, cfg);

    const double gain = cache_gain(ctx, y);
    double lagr = lagrangian(ctx, y, psi);
    if (lagr < 0.0) {
      cfg.dual_step_scale *= 0.5;
      psi = DualVector::zeros(ctx.instance());
      lagr = cache_gain(ctx, y);
      std::ostringstream os;
      os << "negative Lagrangian at t=" << t << "; dual scale halved to "
         << cfg.dual_step_scale << " and multipliers reset";
      report.events.push_back(os.str());
    }

    const InfMetrics inf = compute_inf(ctx, y);
    report.records.push_back({t, gain, lagr, inf.avg, inf.max, psi.psi.norm()});
    ++report.iterations;

    const bool small_move = t > 0 && std::abs(gain - prev_gain) < cfg.gain_delta_threshold;
    prev_gain = gain;
    if (inf.avg <= cfg.inf_threshold && small_move) {
      report.converged = true;
      if (cfg.stop_on_convergence) break;
    }
  }

  report.final_y = y;
  report.final_psi = psi;
  report.final_gain = cache_gain(ctx, y);
  const InfMetrics inf = compute_inf(ctx, y);
  report.final_inf = inf.avg;
  report.final_max_inf = inf.max;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

}  // namespace cachenet
