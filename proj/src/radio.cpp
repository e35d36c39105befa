#include "mecsim/radio.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mecsim/scenario.hpp"
#include "mecsim/units.hpp"

namespace mecsim::radio {

double path_loss_db(double distance_m, const ChannelParams& channel, double fading_db) {
  if (!(distance_m > 0.0)) {
    throw std::domain_error("path_loss_db: distance must be positive");
  }
  return channel.pl_ref_db +
         10.0 * channel.pl_exponent * std::log10(distance_m / channel.ref_distance_m) + fading_db;
}

double channel_gain(double path_loss_db) { return std::pow(10.0, -path_loss_db / 10.0); }

double snr(double tx_power_w, double gain, double noise_power_w) {
  if (!(noise_power_w > 0.0)) {
    throw std::domain_error("snr: noise power must be positive");
  }
  return tx_power_w * gain / noise_power_w;
}

double uplink_rate(double bandwidth_hz, std::size_t n_associated, double snr, bool associated) {
  if (!associated) return 0.0;
  if (n_associated == 0) {
    throw std::logic_error("uplink_rate: associated user on a server with no associated users");
  }
  return bandwidth_hz / static_cast<double>(n_associated) * std::log2(1.0 + snr);
}

double noise_power(double noise_psd_dbm_hz, double bandwidth_hz, double interference_dbm) {
  double watts = units::dbm_to_watts(noise_psd_dbm_hz) * bandwidth_hz;
  if (std::isfinite(interference_dbm)) watts += units::dbm_to_watts(interference_dbm);
  return watts;
}

double fading_db_from_amplitude(double amplitude) { return -20.0 * std::log10(amplitude); }

LinkQuality evaluate_link(double distance_m, const ChannelParams& channel, double fading_db,
                          double tx_power_w, double bandwidth_hz, std::size_t n_associated) {
  LinkQuality q;
  q.path_loss_db = path_loss_db(distance_m, channel, fading_db);
  q.gain = channel_gain(q.path_loss_db);
  const double share = bandwidth_hz / static_cast<double>(n_associated == 0 ? 1 : n_associated);
  q.snr = snr(tx_power_w, q.gain,
              noise_power(channel.noise_psd_dbm_hz, share, channel.interference_dbm));
  q.rate_bps = uplink_rate(bandwidth_hz, n_associated, q.snr, n_associated > 0);
  return q;
}

}  // namespace mecsim::radio
