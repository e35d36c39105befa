#include <doctest.h>

#include <algorithm>

#include "mecsim/config.hpp"
#include "mecsim/units.hpp"

using namespace mecsim;
using nlohmann::json;

namespace {

bool has_error(const ConfigError& e, const std::string& path, const std::string& reason) {
  return std::any_of(e.errors().begin(), e.errors().end(),
                     [&](const FieldError& f) { return f.path == path && f.reason == reason; });
}

ConfigError capture(const json& j) {
  try {
    validate_config(j);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  return ConfigError({});
}

}  // namespace

TEST_CASE("defaults validate") {
  const SimConfig c = validate_config(json::object());
  CHECK(c.servers.size() == 3);
  CHECK(c.users.count == 100);
  CHECK(c.servers[0].buffer_total == doctest::Approx(units::mb_to_bits(8.0)));
  CHECK(c.servers[0].buffer_free_init == c.servers[0].buffer_total);
  CHECK(c.users.task_max_bits == doctest::Approx(units::kb_to_bits(100.0)));
  CHECK(c.users.deadline_s == doctest::Approx(0.1));
}

TEST_CASE("8 MB free with 2 MB epsilon is valid") {
  const json j = {{"servers", {{"count", 1}, {"buffer_total_mb", 8}, {"epsilon_mb", 2}}}};
  const SimConfig c = validate_config(j);
  CHECK(c.servers[0].buffer_free_init == doctest::Approx(8e6 * 8));
  CHECK(c.servers[0].epsilon == doctest::Approx(2e6 * 8));
}

TEST_CASE("epsilon above the free buffer is rejected with its path") {
  const json j = {{"servers", {{"count", 2}, {"buffer_total_mb", 1}, {"epsilon_mb", 2}}}};
  CHECK(has_error(capture(j), "servers.epsilon_mb", "epsilon exceeds free buffer"));
  const json k = {{"servers", {{"count", 2}, {"buffer_total_mb", 1}, {"epsilon_mb", {0.5, 2}}}}};
  CHECK(has_error(capture(k), "servers.epsilon_mb[1]", "epsilon exceeds free buffer"));
}

TEST_CASE("empty user list is valid") {
  const SimConfig c = validate_config(json{{"users", {{"count", 0}}}});
  CHECK(c.users.count == 0);
}

TEST_CASE("every problem is reported at once") {
  const json j = {{"users", {{"count", -1}, {"deadline_ms", 0}, {"bogus", 1}}},
                  {"nonsense", {}},
                  {"channel", {{"fading", "nakagami"}}}};
  const ConfigError e = capture(j);
  CHECK(has_error(e, "users.count", "expected a non-negative integer"));
  CHECK(has_error(e, "users.deadline_ms", "must be positive"));
  CHECK(has_error(e, "users.bogus", "unknown key"));
  CHECK(has_error(e, "nonsense", "unknown section"));
  CHECK(has_error(e, "channel.fading", "must be one of rayleigh | none"));
}

TEST_CASE("per-server arrays must match the count") {
  const json j = {{"servers", {{"count", 3}, {"cpu_rate_hz", {1e6, 2e6}}}}};
  CHECK(has_error(capture(j), "servers.cpu_rate_hz", "array length 2 does not match count 3"));
  const json k = {{"servers", {{"count", 2}, {"cpu_rate_hz", {1e6, 2e6}}}}};
  const SimConfig c = validate_config(k);
  CHECK(c.servers[1].cpu_rate == 2e6);
}

TEST_CASE("ruin pipeline needs claim_mu") {
  const json j = {{"experiment", {{"preset", "ruin_vs_epsilon"}}}};
  CHECK(has_error(capture(j), "ruin.claim_mu", "missing required key for the ruin pipeline"));
}

TEST_CASE("claim rate roles") {
  RuinConfig r;
  CHECK(r.claim_rate_per_bit(1000.0) == doctest::Approx(1e-3));
  r.claim_mu = 2.0;
  r.claim_unit_mb = 1.0;
  CHECK(r.claim_rate_per_bit(1000.0) == doctest::Approx(2.0 / 8e6));
  r.claim_param_role = ClaimParamRole::kMean;
  CHECK(r.claim_rate_per_bit(1000.0) == doctest::Approx(1.0 / 16e6));
}

TEST_CASE("merge and dotted set") {
  json base = {{"servers", {{"count", 3}, {"cpu_rate_hz", 1e6}}}};
  merge_config(base, json{{"servers", {{"count", 2}}}, {"users", {{"count", 5}}}});
  CHECK(base["servers"]["count"] == 2);
  CHECK(base["servers"]["cpu_rate_hz"] == 1e6);
  CHECK(base["users"]["count"] == 5);
  set_config_value(base, "users.count", 40.0);
  CHECK(base["users"]["count"].is_number_integer());
  set_config_value(base, "ruin.epsilon_mb", 2.5);
  CHECK(base["ruin"]["epsilon_mb"] == 2.5);
  CHECK(validate_config(base).users.count == 40);
}

TEST_CASE("non-object root") {
  CHECK_THROWS_AS(validate_config(json::array()), ConfigError);
}
