#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mecsim/association.hpp"
#include "mecsim/cost.hpp"

namespace mecsim {

struct SimConfig;

/// Everything one associated user needs to choose its split. Rates and
/// server CPU shares are frozen once association fixes |K_n|.
struct OffloadContext {
  double task_bits = 0.0;     // D
  double rate_bps = 0.0;      // R
  double gamma_server = 0.0;  // server CPU share, cycles/s
  double gamma_local = 0.0;   // device CPU, cycles/s
  double mu0 = 10.0;          // cycles/bit
  double tx_power = 0.2;      // W
  double eta_local = 1.0e-28;
  double deadline = 0.1;      // s
  double omega = 1.0;
  double eta_server = 1.0e-28;  // only for the server-energy side metric
};

struct OffloadBounds {
  double lo = 0.0;
  double hi = 0.0;
  bool feasible = false;  // lo <= hi
};

struct OffloadDecision {
  double alpha_bits = 0.0;
  double beta_bits = 0.0;
  bool feasible = false;
  double objective_value = 0.0;  // joules: local energy + omega * transmit energy
  double bound_lo = 0.0;
  double bound_hi = 0.0;
};

enum class BaselinePolicy { kEqual, kAll };

/// Interval of offloaded bits meeting both deadlines:
///   lo = max(0, D - gamma_local T / mu0),  hi = min(D, T / (mu0/gamma_server + 1/R)).
/// Endpoints are nudged by an ulp where needed so that substituting them back
/// through the cost model satisfies the deadlines exactly.
OffloadBounds offload_bounds(const OffloadContext& ctx);

/// Objective of one user at a given split; +inf when bits go over a zero-rate link.
double offload_objective(const OffloadContext& ctx, double alpha_bits);

/// Direct substitution check of both deadlines and 0 <= alpha <= D.
bool satisfies_constraints(const OffloadContext& ctx, double alpha_bits);

/// The objective is linear in alpha, so the optimum sits on an endpoint:
/// lo when offloading a bit costs more than computing it locally (ties too),
/// hi otherwise. Infeasible contexts come back with feasible = false and alpha = lo.
OffloadDecision optimal_offload(const OffloadContext& ctx);

/// Fixed split (D/2 or D); feasibility is reported, never enforced.
OffloadDecision baseline_offload(const OffloadContext& ctx, BaselinePolicy policy);

/// sum_k eta_k gamma_k^2 mu0 beta_k + omega * sum_k P_k alpha_k / R_k.
/// Throws std::invalid_argument when the spans differ in length.
double total_energy(std::span<const OffloadDecision> decisions,
                    std::span<const OffloadContext> ctxs, double omega);

/// Server-side computation energy of the offloaded bits (reported, not optimized).
double total_server_energy(std::span<const OffloadDecision> decisions,
                           std::span<const OffloadContext> ctxs);

CostBreakdown cost_breakdown(const OffloadContext& ctx, double alpha_bits);

struct UserContext {
  std::size_t user = 0;
  std::size_t server = 0;
  OffloadContext ctx;
};

/// Contexts for all associated users, in user order. |K_n| counts every
/// associated user, including ones that later offload nothing.
std::vector<UserContext> build_offload_contexts(const Scenario& scenario,
                                                const Association& assoc,
                                                const SimConfig& config);

}  // namespace mecsim
