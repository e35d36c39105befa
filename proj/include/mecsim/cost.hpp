#pragma once

namespace mecsim {

struct LatencyEnergy {
  double seconds = 0.0;
  double joules = 0.0;
};

/// The six per-user latency/energy components of one offloading split.
struct CostBreakdown {
  double tx_latency = 0.0;
  double tx_energy = 0.0;
  double server_latency = 0.0;
  double server_energy = 0.0;
  double local_latency = 0.0;
  double local_energy = 0.0;
};

namespace cost {

/// alpha/R seconds and P*alpha/R joules. Throws std::domain_error
/// ("unreachable server") when bits must be sent over a zero-rate link.
LatencyEnergy uplink_costs(double alpha_bits, double rate_bps, double tx_power_w);

/// mu0*alpha/gamma seconds and eta*gamma^2*mu0*alpha joules at the server.
LatencyEnergy server_costs(double alpha_bits, double gamma_server, double mu0, double eta_server);

/// mu0*beta/gamma_k seconds and eta_k*gamma_k^2*mu0*beta joules on the device.
LatencyEnergy local_costs(double beta_bits, double gamma_local, double mu0, double eta_local);

}  // namespace cost
}  // namespace mecsim
