#include "mecsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mecsim/config.hpp"
#include "mecsim/radio.hpp"
#include "mecsim/random.hpp"

namespace mecsim {

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

namespace {

std::size_t link_index(std::size_t user, std::size_t server, std::size_t users, std::size_t servers) {
  if (user >= users || server >= servers) throw std::out_of_range("Scenario: link index out of range");
  return user * servers + server;
}

}  // namespace

Scenario::Scenario(std::vector<ServerSpec> servers, std::vector<UserSpec> users,
                   ChannelParams channel, std::vector<double> fading_db, std::uint64_t seed)
    : servers_(std::move(servers)),
      users_(std::move(users)),
      channel_(channel),
      fading_db_(std::move(fading_db)),
      seed_(seed) {
  const std::size_t links = users_.size() * servers_.size();
  if (fading_db_.size() != links) {
    throw std::invalid_argument("Scenario: fading matrix does not match users x servers");
  }
  path_loss_db_.resize(links);
  gain_.resize(links);
  for (std::size_t k = 0; k < users_.size(); ++k) {
    for (std::size_t n = 0; n < servers_.size(); ++n) {
      const std::size_t i = k * servers_.size() + n;
      path_loss_db_[i] = radio::path_loss_db(link_distance(k, n), channel_, fading_db_[i]);
      gain_[i] = radio::channel_gain(path_loss_db_[i]);
    }
  }
}

double Scenario::fading_db(std::size_t user, std::size_t server) const {
  return fading_db_[link_index(user, server, users_.size(), servers_.size())];
}

double Scenario::path_loss_db(std::size_t user, std::size_t server) const {
  return path_loss_db_[link_index(user, server, users_.size(), servers_.size())];
}

double Scenario::gain(std::size_t user, std::size_t server) const {
  return gain_[link_index(user, server, users_.size(), servers_.size())];
}

double Scenario::link_distance(std::size_t user, std::size_t server) const {
  // The log-distance model is only defined beyond the reference distance.
  return std::max(distance(users_.at(user).position, servers_.at(server).position),
                  channel_.ref_distance_m);
}

double Scenario::full_band_snr(std::size_t user, std::size_t server) const {
  const auto& sv = servers_.at(server);
  return radio::snr(users_.at(user).tx_power, gain(user, server),
                    radio::noise_power(channel_.noise_psd_dbm_hz, sv.bandwidth,
                                       channel_.interference_dbm));
}

Scenario generate_scenario(const SimConfig& config, std::uint64_t seed) {
  const auto& profile = config.users;
  const std::size_t n_servers = config.servers.size();
  std::vector<UserSpec> users;
  users.reserve(profile.count);
  std::vector<double> fading(profile.count * n_servers, 0.0);

  for (std::size_t k = 0; k < profile.count; ++k) {
    Rng rng(derive_seed(seed, k));
    UserSpec u;
    u.id = k;
    u.position.x = rng.uniform(0.0, config.area.width_m);
    u.position.y = rng.uniform(0.0, config.area.height_m);
    u.task_bits = profile.task_min_bits +
                  (profile.task_max_bits - profile.task_min_bits) * rng.uniform_open_closed();
    u.tx_power = profile.tx_power_w;
    u.cpu_rate = profile.cpu_rate;
    u.eta_local = profile.eta_local;
    u.deadline = profile.deadline_s;
    for (std::size_t n = 0; n < n_servers; ++n) {
      // Drawn even without fading so the stream layout does not depend on the model.
      const double amplitude = rng.rayleigh(config.channel.rayleigh_scale);
      if (config.channel.fading == FadingModel::kRayleigh) {
        fading[k * n_servers + n] = radio::fading_db_from_amplitude(amplitude);
      }
    }
    users.push_back(u);
  }
  return Scenario(config.servers, std::move(users), config.channel, std::move(fading), seed);
}

}  // namespace mecsim
