#include "mecsim/cost.hpp"

#include <stdexcept>

namespace mecsim::cost {

LatencyEnergy uplink_costs(double alpha_bits, double rate_bps, double tx_power_w) {
  if (alpha_bits == 0.0) return {};
  if (!(rate_bps > 0.0)) throw std::domain_error("uplink_costs: unreachable server (zero rate)");
  const double latency = alpha_bits / rate_bps;
  return {latency, tx_power_w * latency};
}

LatencyEnergy server_costs(double alpha_bits, double gamma_server, double mu0, double eta_server) {
  if (!(gamma_server > 0.0)) throw std::domain_error("server_costs: gamma_server must be positive");
  return {mu0 * alpha_bits / gamma_server, eta_server * gamma_server * gamma_server * mu0 * alpha_bits};
}

LatencyEnergy local_costs(double beta_bits, double gamma_local, double mu0, double eta_local) {
  if (!(gamma_local > 0.0)) throw std::domain_error("local_costs: gamma_local must be positive");
  return {mu0 * beta_bits / gamma_local, eta_local * gamma_local * gamma_local * mu0 * beta_bits};
}

}  // namespace mecsim::cost
