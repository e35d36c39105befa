#include "oracle/offload_grid.hpp"

#include <limits>
#include <stdexcept>

#include "mecsim/cost.hpp"

namespace mecsim::oracle {

namespace {

bool feasible_by_substitution(const OffloadContext& ctx, double alpha) {
  const double beta = ctx.task_bits - alpha;
  if (alpha < 0.0 || beta < 0.0) return false;
  if (alpha > 0.0 && !(ctx.rate_bps > 0.0)) return false;
  const LatencyEnergy local = cost::local_costs(beta, ctx.gamma_local, ctx.mu0, ctx.eta_local);
  if (local.seconds > ctx.deadline) return false;
  if (alpha == 0.0) return true;
  const LatencyEnergy up = cost::uplink_costs(alpha, ctx.rate_bps, ctx.tx_power);
  const LatencyEnergy srv = cost::server_costs(alpha, ctx.gamma_server, ctx.mu0, ctx.eta_server);
  return up.seconds + srv.seconds <= ctx.deadline;
}

double energy_by_substitution(const OffloadContext& ctx, double alpha) {
  const double beta = ctx.task_bits - alpha;
  const double local = cost::local_costs(beta, ctx.gamma_local, ctx.mu0, ctx.eta_local).joules;
  const double up = alpha > 0.0 ? cost::uplink_costs(alpha, ctx.rate_bps, ctx.tx_power).joules : 0.0;
  return local + ctx.omega * up;
}

}  // namespace

OffloadDecision oracle_offload_grid(const OffloadContext& ctx, std::size_t grid_points) {
  if (grid_points < 2) throw std::invalid_argument("oracle grid needs at least 2 points");
  OffloadDecision best;
  best.objective_value = std::numeric_limits<double>::infinity();
  const double d = ctx.task_bits;
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double alpha = i + 1 == grid_points
                             ? d
                             : d * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    if (!feasible_by_substitution(ctx, alpha)) continue;
    const double e = energy_by_substitution(ctx, alpha);
    if (e < best.objective_value) {
      best.alpha_bits = alpha;
      best.beta_bits = d - alpha;
      best.objective_value = e;
      best.feasible = true;
    }
    if (d == 0.0) break;
  }
  if (!best.feasible) best.objective_value = 0.0;
  return best;
}

}  // namespace mecsim::oracle
