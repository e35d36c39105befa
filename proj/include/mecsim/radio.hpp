#pragma once

#include <cstddef>

namespace mecsim {

struct ChannelParams;

/// Per-link radio figures for one (user, server) pair.
struct LinkQuality {
  double path_loss_db = 0.0;
  double gain = 0.0;  // linear, 10^(-path_loss_db/10)
  double snr = 0.0;   // linear
  double rate_bps = 0.0;
};

namespace radio {

/// Log-distance path loss plus a fading term, in dB. Throws
/// std::domain_error for distance <= 0.
double path_loss_db(double distance_m, const ChannelParams& channel, double fading_db);

double channel_gain(double path_loss_db);

/// Throws std::domain_error for noise_power_w <= 0.
double snr(double tx_power_w, double gain, double noise_power_w);

/// Equal-share uplink rate W/n * log2(1 + snr) for an associated user, 0 otherwise.
/// Throws std::logic_error when associated with n_associated == 0.
double uplink_rate(double bandwidth_hz, std::size_t n_associated, double snr, bool associated);

/// Thermal noise over `bandwidth_hz` from a PSD in dBm/Hz, plus an optional
/// interference floor in dBm (pass -infinity to disable).
double noise_power(double noise_psd_dbm_hz, double bandwidth_hz, double interference_dbm);

/// Fading term in dB for a fading amplitude; a strong amplitude lowers the loss.
double fading_db_from_amplitude(double amplitude);

LinkQuality evaluate_link(double distance_m, const ChannelParams& channel, double fading_db,
                          double tx_power_w, double bandwidth_hz, std::size_t n_associated);

}  // namespace radio
}  // namespace mecsim
