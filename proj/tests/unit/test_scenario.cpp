#include <doctest.h>

#include <cmath>

#include "mecsim/config.hpp"
#include "mecsim/radio.hpp"
#include "mecsim/scenario.hpp"

using namespace mecsim;
using nlohmann::json;

TEST_CASE("3 servers and 100 users give a 3x100 matrix") {
  const SimConfig c = validate_config(json::object());
  const Scenario s = generate_scenario(c, 5);
  REQUIRE(s.num_servers() == 3);
  REQUIRE(s.num_users() == 100);
  for (std::size_t k = 0; k < 100; ++k) {
    for (std::size_t n = 0; n < 3; ++n) {
      CHECK(std::isfinite(s.gain(k, n)));
      CHECK(s.gain(k, n) > 0.0);
    }
  }
  CHECK_THROWS(s.gain(100, 0));
  CHECK_THROWS(s.gain(0, 3));
}

TEST_CASE("same seed gives identical scenarios") {
  const SimConfig c = validate_config(json::object());
  const Scenario a = generate_scenario(c, 17);
  const Scenario b = generate_scenario(c, 17);
  const Scenario other = generate_scenario(c, 18);
  bool differs = false;
  for (std::size_t k = 0; k < a.num_users(); ++k) {
    CHECK(a.users()[k].task_bits == b.users()[k].task_bits);
    for (std::size_t n = 0; n < a.num_servers(); ++n) {
      CHECK(a.gain(k, n) == b.gain(k, n));
      differs = differs || a.gain(k, n) != other.gain(k, n);
    }
  }
  CHECK(differs);
}

TEST_CASE("users are shared across user counts") {
  SimConfig c = validate_config(json::object());
  const Scenario big = generate_scenario(c, 3);
  c.users.count = 20;
  const Scenario small = generate_scenario(c, 3);
  for (std::size_t k = 0; k < 20; ++k) {
    CHECK(small.users()[k].task_bits == big.users()[k].task_bits);
    CHECK(small.gain(k, 1) == big.gain(k, 1));
  }
}

TEST_CASE("zero fading at the reference distance gives 10^(-theta0/10)") {
  ChannelParams ch;
  ch.fading = FadingModel::kNone;
  std::vector<ServerSpec> servers(2);
  servers[0].position = {0.0, 0.0};
  servers[1].position = {10.0, 0.0};
  std::vector<UserSpec> users(2);
  users[0].position = {1.0, 0.0};
  users[1].position = {9.0, 0.0};
  const Scenario s(servers, users, ch, std::vector<double>(4, 0.0), 0);
  CHECK(s.gain(0, 0) == doctest::Approx(1e-3));
  CHECK(s.gain(1, 1) == doctest::Approx(1e-3));
  CHECK(s.path_loss_db(0, 1) == doctest::Approx(30.0 + 30.0 * std::log10(9.0)));
}

TEST_CASE("links shorter than the reference distance are floored") {
  ChannelParams ch;
  std::vector<ServerSpec> servers(1);
  std::vector<UserSpec> users(1);
  const Scenario s(servers, users, ch, {0.0}, 0);
  CHECK(s.link_distance(0, 0) == ch.ref_distance_m);
  CHECK(s.path_loss_db(0, 0) == doctest::Approx(ch.pl_ref_db));
}

TEST_CASE("fading entries must match users x servers") {
  std::vector<ServerSpec> servers(2);
  std::vector<UserSpec> users(3);
  CHECK_THROWS(Scenario(servers, users, ChannelParams{}, std::vector<double>(5, 0.0), 0));
}

TEST_CASE("users are uniform over the area") {
  json j = {{"users", {{"count", 10000}}}, {"area", {{"width_m", 5000}, {"height_m", 5000}}}};
  const Scenario s = generate_scenario(validate_config(j), 123);
  double sx = 0.0;
  double sy = 0.0;
  double st = 0.0;
  for (const auto& u : s.users()) {
    CHECK(u.position.x >= 0.0);
    CHECK(u.position.x <= 5000.0);
    CHECK(u.task_bits > 0.0);
    CHECK(u.task_bits <= 8e5);
    sx += u.position.x;
    sy += u.position.y;
    st += u.task_bits;
  }
  CHECK(std::fabs(sx / 10000 - 2500.0) < 0.02 * 2500.0);
  CHECK(std::fabs(sy / 10000 - 2500.0) < 0.02 * 2500.0);
  CHECK(std::fabs(st / 10000 - 4e5) < 0.02 * 4e5);
}

TEST_CASE("full-band snr matches a direct recomputation") {
  const Scenario s = generate_scenario(validate_config(json::object()), 9);
  for (std::size_t k = 0; k < 10; ++k) {
    for (std::size_t n = 0; n < 3; ++n) {
      const auto& sv = s.servers()[n];
      const double noise = radio::noise_power(s.channel().noise_psd_dbm_hz, sv.bandwidth,
                                              s.channel().interference_dbm);
      CHECK(s.full_band_snr(k, n) ==
            doctest::Approx(s.users()[k].tx_power * s.gain(k, n) / noise));
    }
  }
}
