#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace mecsim {

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Position& a, const Position& b);

struct ServerSpec {
  std::size_t id = 0;
  Position position;
  double buffer_total = 0.0;      // bits
  double buffer_free_init = 0.0;  // bits, initial surplus
  double cpu_rate = 6.0e5;        // cycles/s, shared among associated users
  double bandwidth = 20.0e6;      // Hz
  double epsilon = 0.0;           // bits, tolerable surplus
  double eta_server = 1.0e-28;
};

struct UserSpec {
  std::size_t id = 0;
  Position position;
  double task_bits = 0.0;
  double tx_power = 0.2;  // W
  double cpu_rate = 7.0e4;
  double eta_local = 1.0e-28;
  double deadline = 0.1;  // s
};

enum class FadingModel { kNone, kRayleigh };

struct ChannelParams {
  double pl_ref_db = 30.0;
  double ref_distance_m = 1.0;
  double pl_exponent = 3.0;
  double noise_psd_dbm_hz = -174.0;
  double interference_dbm = -std::numeric_limits<double>::infinity();
  double cycles_per_bit = 10.0;
  FadingModel fading = FadingModel::kRayleigh;
  double rayleigh_scale = 1.0;
};

/// Immutable world: servers, users and the frozen per-link channel draws.
class Scenario {
public:
  Scenario(std::vector<ServerSpec> servers, std::vector<UserSpec> users, ChannelParams channel,
           std::vector<double> fading_db, std::uint64_t seed);

  const std::vector<ServerSpec>& servers() const noexcept { return servers_; }
  const std::vector<UserSpec>& users() const noexcept { return users_; }
  const ChannelParams& channel() const noexcept { return channel_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t num_users() const noexcept { return users_.size(); }
  std::size_t num_servers() const noexcept { return servers_.size(); }

  double fading_db(std::size_t user, std::size_t server) const;
  double path_loss_db(std::size_t user, std::size_t server) const;
  double gain(std::size_t user, std::size_t server) const;
  /// Link distance, floored at the reference distance of the path-loss model.
  double link_distance(std::size_t user, std::size_t server) const;
  /// SNR with noise over the full server band (used before |K_n| is known).
  double full_band_snr(std::size_t user, std::size_t server) const;

private:
  std::vector<ServerSpec> servers_;
  std::vector<UserSpec> users_;
  ChannelParams channel_;
  std::vector<double> fading_db_;  // row-major users x servers
  std::vector<double> path_loss_db_;
  std::vector<double> gain_;
  std::uint64_t seed_;
};

struct SimConfig;

/// Pure function of (config, seed). Each user draws from its own sub-stream,
/// so the first k users are identical across configs that differ only in the
/// user count.
Scenario generate_scenario(const SimConfig& config, std::uint64_t seed);

}  // namespace mecsim
