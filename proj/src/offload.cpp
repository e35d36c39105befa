#include "mecsim/offload.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mecsim/config.hpp"
#include "mecsim/radio.hpp"

namespace mecsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool local_deadline_ok(const OffloadContext& ctx, double alpha) {
  return cost::local_costs(ctx.task_bits - alpha, ctx.gamma_local, ctx.mu0, ctx.eta_local).seconds <=
         ctx.deadline;
}

bool offload_deadline_ok(const OffloadContext& ctx, double alpha) {
  if (alpha == 0.0) return true;
  if (!(ctx.rate_bps > 0.0)) return false;
  const double t = cost::server_costs(alpha, ctx.gamma_server, ctx.mu0, ctx.eta_server).seconds +
                   cost::uplink_costs(alpha, ctx.rate_bps, ctx.tx_power).seconds;
  return t <= ctx.deadline;
}

OffloadDecision make_decision(const OffloadContext& ctx, double alpha, bool feasible,
                              const OffloadBounds& b) {
  OffloadDecision d;
  d.alpha_bits = alpha;
  d.beta_bits = ctx.task_bits - alpha;
  d.feasible = feasible;
  d.objective_value = offload_objective(ctx, alpha);
  d.bound_lo = b.lo;
  d.bound_hi = b.hi;
  return d;
}

}  // namespace

OffloadBounds offload_bounds(const OffloadContext& ctx) {
  const double D = ctx.task_bits;
  OffloadBounds b;

  b.lo = std::max(0.0, D - ctx.gamma_local * ctx.deadline / ctx.mu0);
  while (b.lo < D && !local_deadline_ok(ctx, b.lo)) b.lo = std::nextafter(b.lo, kInf);

  if (ctx.rate_bps > 0.0) {
    b.hi = std::min(D, ctx.deadline / (ctx.mu0 / ctx.gamma_server + 1.0 / ctx.rate_bps));
    while (b.hi > 0.0 && !offload_deadline_ok(ctx, b.hi)) b.hi = std::nextafter(b.hi, 0.0);
  } else {
    b.hi = 0.0;
  }
  b.feasible = b.lo <= b.hi;
  return b;
}

double offload_objective(const OffloadContext& ctx, double alpha_bits) {
  const double local =
      cost::local_costs(ctx.task_bits - alpha_bits, ctx.gamma_local, ctx.mu0, ctx.eta_local).joules;
  if (alpha_bits > 0.0 && !(ctx.rate_bps > 0.0)) return kInf;
  return local + ctx.omega * cost::uplink_costs(alpha_bits, ctx.rate_bps, ctx.tx_power).joules;
}

bool satisfies_constraints(const OffloadContext& ctx, double alpha_bits) {
  return alpha_bits >= 0.0 && alpha_bits <= ctx.task_bits && local_deadline_ok(ctx, alpha_bits) &&
         offload_deadline_ok(ctx, alpha_bits);
}

OffloadDecision optimal_offload(const OffloadContext& ctx) {
  const OffloadBounds b = offload_bounds(ctx);
  const double local_per_bit = ctx.eta_local * ctx.gamma_local * ctx.gamma_local * ctx.mu0;
  const double tx_per_bit = ctx.rate_bps > 0.0 ? ctx.omega * ctx.tx_power / ctx.rate_bps : kInf;
  const double slope = tx_per_bit - local_per_bit;
  if (!b.feasible) return make_decision(ctx, b.lo, false, b);
  return make_decision(ctx, slope < 0.0 ? b.hi : b.lo, true, b);
}

OffloadDecision baseline_offload(const OffloadContext& ctx, BaselinePolicy policy) {
  const double alpha = policy == BaselinePolicy::kEqual ? ctx.task_bits / 2.0 : ctx.task_bits;
  return make_decision(ctx, alpha, satisfies_constraints(ctx, alpha), offload_bounds(ctx));
}

double total_energy(std::span<const OffloadDecision> decisions,
                    std::span<const OffloadContext> ctxs, double omega) {
  if (decisions.size() != ctxs.size()) {
    throw std::invalid_argument("total_energy: decisions and contexts are not aligned");
  }
  double local = 0.0;
  double tx = 0.0;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const auto& c = ctxs[i];
    const auto& d = decisions[i];
    local += cost::local_costs(d.beta_bits, c.gamma_local, c.mu0, c.eta_local).joules;
    tx += cost::uplink_costs(d.alpha_bits, c.rate_bps, c.tx_power).joules;
  }
  return local + omega * tx;
}

double total_server_energy(std::span<const OffloadDecision> decisions,
                           std::span<const OffloadContext> ctxs) {
  if (decisions.size() != ctxs.size()) {
    throw std::invalid_argument("total_server_energy: decisions and contexts are not aligned");
  }
  double e = 0.0;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    e += cost::server_costs(decisions[i].alpha_bits, ctxs[i].gamma_server, ctxs[i].mu0,
                            ctxs[i].eta_server)
             .joules;
  }
  return e;
}

CostBreakdown cost_breakdown(const OffloadContext& ctx, double alpha_bits) {
  CostBreakdown c;
  const auto up = cost::uplink_costs(alpha_bits, ctx.rate_bps, ctx.tx_power);
  const auto sv = cost::server_costs(alpha_bits, ctx.gamma_server, ctx.mu0, ctx.eta_server);
  const auto lo = cost::local_costs(ctx.task_bits - alpha_bits, ctx.gamma_local, ctx.mu0, ctx.eta_local);
  c.tx_latency = up.seconds;
  c.tx_energy = up.joules;
  c.server_latency = sv.seconds;
  c.server_energy = sv.joules;
  c.local_latency = lo.seconds;
  c.local_energy = lo.joules;
  return c;
}

std::vector<UserContext> build_offload_contexts(const Scenario& scenario, const Association& assoc,
                                                const SimConfig& config) {
  std::vector<UserContext> out;
  for (std::size_t k = 0; k < scenario.num_users(); ++k) {
    if (!assoc.assignment.at(k)) continue;
    const std::size_t n = *assoc.assignment[k];
    const auto& sv = scenario.servers()[n];
    const auto& u = scenario.users()[k];
    const std::size_t members = assoc.admitted_sets.at(n).size();

    const double noise = radio::noise_power(scenario.channel().noise_psd_dbm_hz,
                                            sv.bandwidth / static_cast<double>(members),
                                            scenario.channel().interference_dbm);
    const double snr = radio::snr(u.tx_power, scenario.gain(k, n), noise);

    UserContext uc;
    uc.user = k;
    uc.server = n;
    uc.ctx.task_bits = u.task_bits;
    uc.ctx.rate_bps = radio::uplink_rate(sv.bandwidth, members, snr, true);
    uc.ctx.gamma_server = config.offload.server_cpu_split == CpuSplit::kEqual
                              ? sv.cpu_rate / static_cast<double>(members)
                              : sv.cpu_rate;
    uc.ctx.gamma_local = u.cpu_rate;
    uc.ctx.mu0 = scenario.channel().cycles_per_bit;
    uc.ctx.tx_power = u.tx_power;
    uc.ctx.eta_local = u.eta_local;
    uc.ctx.deadline = u.deadline;
    uc.ctx.omega = config.offload.omega;
    uc.ctx.eta_server = sv.eta_server;
    out.push_back(uc);
  }
  return out;
}

}  // namespace mecsim
