#include "mecsim/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "mecsim/units.hpp"

namespace mecsim {

using nlohmann::json;

namespace {

std::string join_errors(const std::vector<FieldError>& errors) {
  std::ostringstream os;
  os << "invalid configuration:";
  for (const auto& e : errors) os << "\n  " << e.path << ": " << e.reason;
  return os.str();
}

// Reads one object section, remembering which keys were consumed so leftovers
// can be reported as unknown.
class Section {
public:
  Section(const json& root, std::string name, std::vector<FieldError>& errors)
      : name_(std::move(name)), errors_(errors) {
    if (root.contains(name_)) {
      const json& v = root.at(name_);
      if (v.is_object()) {
        obj_ = &v;
      } else {
        fail(name_, "expected an object");
      }
    }
  }

  ~Section() {
    if (obj_ == nullptr) return;
    for (const auto& item : obj_->items()) {
      if (!seen_.count(item.key())) fail(path(item.key()), "unknown key");
    }
  }

  Section(const Section&) = delete;
  Section& operator=(const Section&) = delete;

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_ != nullptr && obj_->contains(key) && !obj_->at(key).is_null();
  }

  const json* raw(const std::string& key) { return has(key) ? &obj_->at(key) : nullptr; }

  double number(const std::string& key, double fallback) {
    const json* v = raw(key);
    if (v == nullptr) return fallback;
    if (!v->is_number()) {
      fail(path(key), "expected a number");
      return fallback;
    }
    return v->get<double>();
  }

  std::optional<double> optional_number(const std::string& key) {
    const json* v = raw(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) {
      fail(path(key), "expected a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    const json* v = raw(key);
    if (v == nullptr) return fallback;
    if (!v->is_number() || v->get<double>() < 0.0 ||
        v->get<double>() != std::floor(v->get<double>())) {
      fail(path(key), "expected a non-negative integer");
      return fallback;
    }
    return static_cast<std::size_t>(v->get<double>());
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = raw(key);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) {
      fail(path(key), "expected true or false");
      return fallback;
    }
    return v->get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback,
                   std::initializer_list<const char*> allowed = {}) {
    const json* v = raw(key);
    if (v == nullptr) return fallback;
    if (!v->is_string()) {
      fail(path(key), "expected a string");
      return fallback;
    }
    std::string s = v->get<std::string>();
    if (allowed.size() != 0) {
      bool ok = false;
      std::string options;
      for (const char* a : allowed) {
        ok = ok || s == a;
        options += options.empty() ? a : std::string(" | ") + a;
      }
      if (!ok) {
        fail(path(key), "must be one of " + options);
        return fallback;
      }
    }
    return s;
  }

  /// A scalar applied to every element, or an array of exactly n numbers.
  std::vector<double> per_item(const std::string& key, std::size_t n, double fallback) {
    std::vector<double> out(n, fallback);
    const json* v = raw(key);
    if (v == nullptr) return out;
    if (v->is_number()) {
      std::fill(out.begin(), out.end(), v->get<double>());
    } else if (v->is_array()) {
      if (v->size() != n) {
        fail(path(key), "array length " + std::to_string(v->size()) + " does not match count " +
                            std::to_string(n));
        return out;
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (!(*v)[i].is_number()) {
          fail(path(key) + "[" + std::to_string(i) + "]", "expected a number");
        } else {
          out[i] = (*v)[i].get<double>();
        }
      }
    } else {
      fail(path(key), "expected a number or an array of numbers");
    }
    return out;
  }

  std::string path(const std::string& key) const { return name_ + "." + key; }
  void fail(const std::string& p, const std::string& reason) { errors_.push_back({p, reason}); }

private:
  std::string name_;
  std::vector<FieldError>& errors_;
  const json* obj_ = nullptr;
  std::set<std::string> seen_;
};

std::string indexed(const std::string& path, std::size_t i, std::size_t n, bool array_given) {
  return (array_given && n > 1) ? path + "[" + std::to_string(i) + "]" : path;
}

std::vector<Position> default_server_layout(std::size_t count, const AreaConfig& area) {
  std::vector<Position> out;
  const double cx = area.width_m / 2.0;
  const double cy = area.height_m / 2.0;
  const double radius = count <= 1 ? 0.0 : std::min(area.width_m, area.height_m) / 4.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double angle =
        std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * static_cast<double>(i) /
                                     static_cast<double>(std::max<std::size_t>(count, 1));
    out.push_back({cx + radius * std::cos(angle), cy + radius * std::sin(angle)});
  }
  return out;
}

void require_positive(Section& s, const std::string& key, double v) {
  if (!(v > 0.0)) s.fail(s.path(key), "must be positive");
}

void require_non_negative(Section& s, const std::string& key, double v) {
  if (!(v >= 0.0)) s.fail(s.path(key), "must be non-negative");
}

std::optional<Pipeline> default_pipeline(const std::string& preset) {
  if (preset == "ruin_vs_epsilon" || preset == "ruin_vs_mu") return Pipeline::kRuin;
  if (preset == "admitted_vs_buffer" || preset == "buffer_usage_comparison") {
    return Pipeline::kAssociation;
  }
  if (preset == "energy_comparison") return Pipeline::kOffload;
  return std::nullopt;
}

}  // namespace

ConfigError::ConfigError(std::vector<FieldError> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

ConfigError::ConfigError(std::string path, std::string reason)
    : ConfigError(std::vector<FieldError>{{std::move(path), std::move(reason)}}) {}

double RuinConfig::claim_rate_per_bit(double mean_task_bits) const {
  if (!claim_mu) return mean_task_bits > 0.0 ? 1.0 / mean_task_bits : 1.0;
  const double unit_bits = units::mb_to_bits(claim_unit_mb);
  return claim_param_role == ClaimParamRole::kRate ? *claim_mu / unit_bits
                                                   : 1.0 / (*claim_mu * unit_bits);
}

const char* pipeline_name(Pipeline p) {
  switch (p) {
    case Pipeline::kRuin: return "ruin";
    case Pipeline::kAssociation: return "association";
    case Pipeline::kOffload: return "offload";
  }
  return "unknown";
}

SimConfig validate_config(const json& raw) {
  std::vector<FieldError> errors;
  SimConfig cfg;

  if (!raw.is_object()) {
    throw ConfigError("<root>", "expected an object");
  }
  static const std::set<std::string> kSections = {"area",    "servers",     "users",     "channel",
                                                  "ruin",    "offload",     "association",
                                                  "experiment"};
  for (const auto& item : raw.items()) {
    if (!kSections.count(item.key())) errors.push_back({item.key(), "unknown section"});
  }

  {
    Section s(raw, "area", errors);
    cfg.area.width_m = s.number("width_m", cfg.area.width_m);
    cfg.area.height_m = s.number("height_m", cfg.area.height_m);
    require_positive(s, "width_m", cfg.area.width_m);
    require_positive(s, "height_m", cfg.area.height_m);
  }

  {
    Section s(raw, "servers", errors);
    const std::size_t n = s.count("count", 3);
    const auto total = s.per_item("buffer_total_mb", n, 8.0);
    const bool free_given = s.has("buffer_free_mb");
    const auto free = s.per_item("buffer_free_mb", n, 0.0);
    const bool eps_given = s.raw("epsilon_mb") != nullptr && s.raw("epsilon_mb")->is_array();
    const auto eps = s.per_item("epsilon_mb", n, 0.0);
    const auto cpu = s.per_item("cpu_rate_hz", n, 6.0e5);
    const auto bw = s.per_item("bandwidth_mhz", n, 20.0);
    const auto eta = s.per_item("eta", n, 1.0e-28);

    std::vector<Position> positions = default_server_layout(n, cfg.area);
    if (const json* p = s.raw("positions_m")) {
      if (!p->is_array() || p->size() != n) {
        s.fail(s.path("positions_m"), "expected an array of " + std::to_string(n) + " [x, y] pairs");
      } else {
        for (std::size_t i = 0; i < n; ++i) {
          const json& xy = (*p)[i];
          if (!xy.is_array() || xy.size() != 2 || !xy[0].is_number() || !xy[1].is_number()) {
            s.fail(s.path("positions_m") + "[" + std::to_string(i) + "]", "expected [x, y]");
          } else {
            positions[i] = {xy[0].get<double>(), xy[1].get<double>()};
          }
        }
      }
    }

    for (std::size_t i = 0; i < n; ++i) {
      ServerSpec sv;
      sv.id = i;
      sv.position = positions[i];
      sv.buffer_total = units::mb_to_bits(total[i]);
      sv.buffer_free_init = units::mb_to_bits(free_given ? free[i] : total[i]);
      sv.epsilon = units::mb_to_bits(eps[i]);
      sv.cpu_rate = cpu[i];
      sv.bandwidth = units::mhz_to_hz(bw[i]);
      sv.eta_server = eta[i];

      if (!(total[i] >= 0.0)) s.fail(indexed(s.path("buffer_total_mb"), i, n, true), "must be non-negative");
      if (!(sv.buffer_free_init >= 0.0)) {
        s.fail(indexed(s.path("buffer_free_mb"), i, n, true), "must be non-negative");
      } else if (sv.buffer_free_init > sv.buffer_total) {
        s.fail(indexed(s.path("buffer_free_mb"), i, n, true), "free buffer exceeds total buffer");
      }
      if (!(sv.epsilon >= 0.0)) {
        s.fail(indexed(s.path("epsilon_mb"), i, n, eps_given), "must be non-negative");
      } else if (sv.epsilon > sv.buffer_free_init) {
        s.fail(indexed(s.path("epsilon_mb"), i, n, eps_given), "epsilon exceeds free buffer");
      }
      if (!(sv.cpu_rate > 0.0)) s.fail(indexed(s.path("cpu_rate_hz"), i, n, true), "must be positive");
      if (!(sv.bandwidth > 0.0)) s.fail(indexed(s.path("bandwidth_mhz"), i, n, true), "must be positive");
      if (!(sv.eta_server >= 0.0)) s.fail(indexed(s.path("eta"), i, n, true), "must be non-negative");
      cfg.servers.push_back(sv);
    }
  }

  {
    Section s(raw, "users", errors);
    auto& u = cfg.users;
    u.count = s.count("count", u.count);
    const double min_kb = s.number("task_min_kb", 0.0);
    const double max_kb = s.number("task_max_kb", 100.0);
    u.task_min_bits = units::kb_to_bits(min_kb);
    u.task_max_bits = units::kb_to_bits(max_kb);
    u.tx_power_w = units::mw_to_w(s.number("tx_power_mw", 200.0));
    u.cpu_rate = s.number("cpu_rate_hz", u.cpu_rate);
    u.eta_local = s.number("eta", u.eta_local);
    u.deadline_s = units::ms_to_s(s.number("deadline_ms", 100.0));
    require_non_negative(s, "task_min_kb", min_kb);
    if (!(max_kb >= min_kb)) s.fail(s.path("task_max_kb"), "must be at least task_min_kb");
    require_positive(s, "tx_power_mw", u.tx_power_w);
    require_positive(s, "cpu_rate_hz", u.cpu_rate);
    require_non_negative(s, "eta", u.eta_local);
    require_positive(s, "deadline_ms", u.deadline_s);
  }

  {
    Section s(raw, "channel", errors);
    auto& c = cfg.channel;
    c.pl_ref_db = s.number("pl_ref_db", c.pl_ref_db);
    c.ref_distance_m = s.number("ref_distance_m", c.ref_distance_m);
    c.pl_exponent = s.number("pl_exponent", c.pl_exponent);
    c.noise_psd_dbm_hz = s.number("noise_psd_dbm_hz", c.noise_psd_dbm_hz);
    c.interference_dbm = s.number("interference_dbm", c.interference_dbm);
    c.cycles_per_bit = s.number("cycles_per_bit", c.cycles_per_bit);
    c.fading = s.text("fading", "rayleigh", {"rayleigh", "none"}) == "none" ? FadingModel::kNone
                                                                           : FadingModel::kRayleigh;
    c.rayleigh_scale = s.number("rayleigh_scale", c.rayleigh_scale);
    require_positive(s, "ref_distance_m", c.ref_distance_m);
    require_positive(s, "pl_exponent", c.pl_exponent);
    require_positive(s, "cycles_per_bit", c.cycles_per_bit);
    require_positive(s, "rayleigh_scale", c.rayleigh_scale);
  }

  {
    Section s(raw, "experiment", errors);
    auto& e = cfg.experiment;
    e.preset = s.text("preset", e.preset,
                      {"ruin_vs_epsilon", "ruin_vs_mu", "admitted_vs_buffer",
                       "buffer_usage_comparison", "energy_comparison", "custom"});
    const std::string pipe = s.text("pipeline", "", {"ruin", "association", "offload"});
    if (pipe == "ruin") e.pipeline = Pipeline::kRuin;
    else if (pipe == "association") e.pipeline = Pipeline::kAssociation;
    else if (pipe == "offload") e.pipeline = Pipeline::kOffload;
    else e.pipeline = default_pipeline(e.preset);
    e.swept_param = s.text("swept_param", "");
    if (const json* v = s.raw("values")) {
      if (!v->is_array()) {
        s.fail(s.path("values"), "expected an array of numbers");
      } else {
        for (std::size_t i = 0; i < v->size(); ++i) {
          if ((*v)[i].is_number()) {
            e.values.push_back((*v)[i].get<double>());
          } else {
            s.fail(s.path("values") + "[" + std::to_string(i) + "]", "expected a number");
          }
        }
      }
    }
    e.replications = s.count("replications", e.replications);
    if (e.replications < 1) s.fail(s.path("replications"), "must be at least 1");
    if (const json* v = s.raw("seed")) {
      if (v->is_number_unsigned()) {
        e.seed = v->get<std::uint64_t>();
      } else if (v->is_number_integer() && v->get<std::int64_t>() >= 0) {
        e.seed = static_cast<std::uint64_t>(v->get<std::int64_t>());
      } else {
        s.fail(s.path("seed"), "expected a non-negative integer");
      }
    }
    if (!e.swept_param.empty() && e.values.empty()) {
      s.fail(s.path("values"), "swept value list must be nonempty");
    }
  }

  {
    Section s(raw, "ruin", errors);
    auto& r = cfg.ruin;
    r.lambda_per_slot = s.number("lambda_per_slot", r.lambda_per_slot);
    r.tau_s = s.number("tau_s", r.tau_s);
    r.claim_mu = s.optional_number("claim_mu");
    r.claim_param_role = s.text("claim_param_role", "rate", {"rate", "mean"}) == "mean"
                             ? ClaimParamRole::kMean
                             : ClaimParamRole::kRate;
    r.claim_unit_mb = s.number("claim_unit_mb", r.claim_unit_mb);
    r.horizon_slots = s.number("horizon_slots", r.horizon_slots);
    r.analytic_terms = s.count("analytic_terms", r.analytic_terms);
    r.mc_paths = s.count("mc_paths", r.mc_paths);
    r.arrivals = s.text("arrivals", "poisson", {"poisson", "per_slot"}) == "per_slot"
                     ? ClaimArrivals::kPerSlot
                     : ClaimArrivals::kPoisson;
    if (auto v = s.optional_number("initial_surplus_mb")) {
      r.initial_surplus_bits = units::mb_to_bits(*v);
      require_non_negative(s, "initial_surplus_mb", *v);
    }
    if (auto v = s.optional_number("epsilon_mb")) {
      r.epsilon_bits = units::mb_to_bits(*v);
      require_non_negative(s, "epsilon_mb", *v);
    }
    if (auto v = s.optional_number("premium_mb_per_slot")) {
      r.premium_bits_per_slot = units::mb_to_bits(*v);
      require_non_negative(s, "premium_mb_per_slot", *v);
    }
    require_non_negative(s, "lambda_per_slot", r.lambda_per_slot);
    require_positive(s, "tau_s", r.tau_s);
    require_positive(s, "horizon_slots", r.horizon_slots);
    require_positive(s, "claim_unit_mb", r.claim_unit_mb);
    if (r.claim_mu && !(*r.claim_mu > 0.0)) s.fail(s.path("claim_mu"), "must be positive");
    if (r.analytic_terms < 1) s.fail(s.path("analytic_terms"), "must be at least 1");
    if (r.mc_paths < 100) s.fail(s.path("mc_paths"), "must be at least 100");
    if (cfg.experiment.pipeline == Pipeline::kRuin && !r.claim_mu) {
      s.fail(s.path("claim_mu"), "missing required key for the ruin pipeline");
    }
  }

  {
    Section s(raw, "offload", errors);
    auto& o = cfg.offload;
    o.omega = s.number("omega", o.omega);
    require_non_negative(s, "omega", o.omega);
    o.infeasible_policy =
        s.text("infeasible_policy", "exclude", {"exclude", "clamp_alpha_lo"}) == "clamp_alpha_lo"
            ? InfeasiblePolicy::kClampAlphaLo
            : InfeasiblePolicy::kExclude;
    o.server_cpu_split = s.text("server_cpu_split", "equal", {"equal", "full"}) == "full"
                             ? CpuSplit::kFull
                             : CpuSplit::kEqual;
  }

  {
    Section s(raw, "association", errors);
    cfg.association.algorithm1_literal_or =
        s.boolean("algorithm1_literal_or", cfg.association.algorithm1_literal_or);
  }

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open configuration file");
  try {
    return json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path, std::string("parse error: ") + e.what());
  }
}

void merge_config(json& base, const json& overrides) {
  if (!base.is_object() || !overrides.is_object()) {
    base = overrides;
    return;
  }
  for (const auto& item : overrides.items()) {
    if (base.contains(item.key()) && base[item.key()].is_object() && item.value().is_object()) {
      merge_config(base[item.key()], item.value());
    } else {
      base[item.key()] = item.value();
    }
  }
}

void set_config_value(json& tree, const std::string& dotted_path, double value) {
  if (dotted_path.empty()) throw ConfigError("experiment.swept_param", "empty parameter path");
  std::string pointer = "/";
  for (char ch : dotted_path) pointer += ch == '.' ? '/' : ch;
  json::json_pointer ptr(pointer);
  // Integer-valued sweeps (user counts) must stay integers for count fields.
  if (value == std::floor(value) && std::fabs(value) < 9.0e15) {
    tree[ptr] = static_cast<std::int64_t>(value);
  } else {
    tree[ptr] = value;
  }
}

}  // namespace mecsim
