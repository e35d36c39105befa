#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mecsim/radio.hpp"
#include "mecsim/scenario.hpp"

using namespace mecsim;

TEST_CASE("path loss examples") {
  ChannelParams ch;
  ch.pl_ref_db = 30.0;
  ch.ref_distance_m = 1.0;
  ch.pl_exponent = 3.0;
  CHECK(radio::path_loss_db(1.0, ch, 0.0) == doctest::Approx(30.0));
  CHECK(radio::path_loss_db(10.0, ch, 0.0) == doctest::Approx(60.0));
  ch.pl_exponent = 2.0;
  CHECK(radio::path_loss_db(100.0, ch, 3.0) == doctest::Approx(73.0));
  CHECK_THROWS_AS(radio::path_loss_db(0.0, ch, 0.0), std::domain_error);
}

TEST_CASE("path loss grows with distance") {
  ChannelParams ch;
  double prev = radio::path_loss_db(1.0, ch, 0.0);
  for (double d = 2.0; d < 5000.0; d *= 1.7) {
    const double pl = radio::path_loss_db(d, ch, 0.0);
    CHECK(pl > prev);
    prev = pl;
  }
}

TEST_CASE("channel gain examples") {
  CHECK(radio::channel_gain(0.0) == doctest::Approx(1.0));
  CHECK(radio::channel_gain(30.0) == doctest::Approx(1e-3));
  CHECK(radio::channel_gain(60.0) == doctest::Approx(1e-6));
}

TEST_CASE("snr examples") {
  CHECK(radio::snr(1.0, 2e-10, 2e-10) == doctest::Approx(1.0));
  CHECK(radio::snr(0.2, 0.0, 1e-9) == 0.0);
  CHECK(radio::snr(0.2, 1e-6, 1e-7) == doctest::Approx(2.0));
  CHECK_THROWS(radio::snr(0.2, 1e-6, 0.0));
}

TEST_CASE("uplink rate examples") {
  CHECK(radio::uplink_rate(20e6, 10, 3.0, true) == doctest::Approx(4e6));
  CHECK(radio::uplink_rate(20e6, 10, 3.0, false) == 0.0);
  CHECK(radio::uplink_rate(20e6, 10, 0.0, true) == 0.0);
  CHECK_THROWS_AS(radio::uplink_rate(20e6, 0, 3.0, true), std::logic_error);
}

TEST_CASE("rate is nonincreasing in the number of sharers") {
  double prev = radio::uplink_rate(20e6, 1, 5.0, true);
  for (std::size_t n = 2; n < 200; ++n) {
    const double r = radio::uplink_rate(20e6, n, 5.0, true);
    CHECK(r <= prev);
    prev = r;
  }
}

TEST_CASE("noise power from psd") {
  // -174 dBm/Hz over 1 Hz is 10^-20.4 W
  CHECK(radio::noise_power(-174.0, 1.0, -std::numeric_limits<double>::infinity()) ==
        doctest::Approx(std::pow(10.0, -20.4)));
  const double base = radio::noise_power(-174.0, 1e6, -std::numeric_limits<double>::infinity());
  CHECK(radio::noise_power(-174.0, 1e6, -100.0) == doctest::Approx(base + 1e-13));
}

TEST_CASE("fading sign: strong amplitude lowers loss") {
  CHECK(radio::fading_db_from_amplitude(1.0) == doctest::Approx(0.0));
  CHECK(radio::fading_db_from_amplitude(10.0) == doctest::Approx(-20.0));
  CHECK(radio::fading_db_from_amplitude(0.1) == doctest::Approx(20.0));
}

TEST_CASE("evaluate_link composes the pieces") {
  ChannelParams ch;
  const LinkQuality q = radio::evaluate_link(10.0, ch, 0.0, 0.2, 20e6, 4);
  CHECK(q.path_loss_db == doctest::Approx(60.0));
  CHECK(q.gain == doctest::Approx(1e-6));
  const double noise = radio::noise_power(ch.noise_psd_dbm_hz, 5e6, ch.interference_dbm);
  CHECK(q.snr == doctest::Approx(0.2e-6 / noise));
  CHECK(q.rate_bps == doctest::Approx(5e6 * std::log2(1.0 + q.snr)));
}
