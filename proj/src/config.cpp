#include "config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "errors.hpp"

namespace vanetflow {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value,
                            std::string_view expected) {
  throw ConfigError(std::string(key), std::string(key) + ": expected " +
                                          std::string(expected) + " (got '" +
                                          std::string(value) + "')");
}

struct UnitFactor {
  std::string_view suffix;
  double factor;
};

// Multiplicative conversions into SI; the empty suffix is always accepted.
constexpr std::array kLengthUnits{UnitFactor{"m", 1.0}, UnitFactor{"km", 1000.0}};
constexpr std::array kTimeUnits{UnitFactor{"s", 1.0}, UnitFactor{"ms", 1e-3},
                                UnitFactor{"min", 60.0},
                                UnitFactor{"h", 3600.0}};
constexpr std::array kSpeedUnits{UnitFactor{"m/s", 1.0},
                                 UnitFactor{"km/h", 1.0 / 3.6},
                                 UnitFactor{"kph", 1.0 / 3.6}};
constexpr std::array kRateUnits{UnitFactor{"veh/h", 1.0},
                                UnitFactor{"cars/h", 1.0},
                                UnitFactor{"veh/s", 3600.0}};
constexpr std::array kPowerUnits{UnitFactor{"W", 1.0}, UnitFactor{"mW", 1e-3}};
constexpr std::array kAccelUnits{UnitFactor{"m/s2", 1.0},
                                 UnitFactor{"m/s^2", 1.0}};

template <std::size_t N>
double apply_units(std::string_view key, std::string_view text, double number,
                   std::string_view suffix,
                   const std::array<UnitFactor, N>& units) {
  if (suffix.empty()) return number;
  for (const auto& u : units) {
    if (u.suffix == suffix) return number * u.factor;
  }
  bad_value(key, text, "a number with a recognised unit");
}

double parse_number(std::string_view key, std::string_view text,
                    std::string_view* rest) {
  const std::string_view t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || !std::isfinite(value)) {
    bad_value(key, text, "a finite number");
  }
  *rest = trim(t.substr(static_cast<std::size_t>(ptr - t.data())));
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string_view t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  bad_value(key, text, "a boolean");
}

std::int64_t parse_int(std::string_view key, std::string_view text) {
  const std::string_view t = trim(text);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    bad_value(key, text, "an integer");
  }
  return value;
}

std::uint64_t parse_u64(std::string_view key, std::string_view text) {
  const std::string_view t = trim(text);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    bad_value(key, text, "an unsigned 64-bit integer");
  }
  return value;
}

struct Field {
  std::string_view key;
  std::function<void(SimConfig&, std::string_view key, std::string_view)> set;
  std::function<std::string(const SimConfig&)> get;
};

Field quantity(std::string_view key, std::string_view dim,
               double SimConfig::*member) {
  return {key,
          [member, dim](SimConfig& c, std::string_view k, std::string_view v) {
            c.*member = parse_quantity(k, v, dim);
          },
          [member](const SimConfig& c) { return format_double(c.*member); }};
}

template <typename Getter>
Field nested(std::string_view key, std::string_view dim, Getter getter) {
  return {key,
          [getter, dim](SimConfig& c, std::string_view k, std::string_view v) {
            getter(c) = parse_quantity(k, v, dim);
          },
          [getter](const SimConfig& c) {
            return format_double(getter(const_cast<SimConfig&>(c)));
          }};
}

template <typename Getter>
Field integer(std::string_view key, Getter getter) {
  return {key,
          [getter](SimConfig& c, std::string_view k, std::string_view v) {
            const auto n = parse_int(k, v);
            if (n < -1'000'000 || n > 1'000'000) bad_value(k, v, "a small integer");
            getter(c) = static_cast<int>(n);
          },
          [getter](const SimConfig& c) {
            return std::to_string(getter(const_cast<SimConfig&>(c)));
          }};
}

Field boolean(std::string_view key, bool SimConfig::*member) {
  return {key,
          [member](SimConfig& c, std::string_view k, std::string_view v) {
            c.*member = parse_bool(k, v);
          },
          [member](const SimConfig& c) {
            return std::string(c.*member ? "true" : "false");
          }};
}

std::string_view variant_name(traffic::LaneChangeVariant v) {
  switch (v) {
    case traffic::LaneChangeVariant::kBase: return "base";
    case traffic::LaneChangeVariant::kBruteForce: return "brute_force";
    case traffic::LaneChangeVariant::kProportional: return "proportional";
  }
  return "?";
}

std::string_view rule_name(traffic::LaneChangeRule r) {
  return r == traffic::LaneChangeRule::kMultiplicative
             ? "multiplicative"
             : "mobil_additive";
}

const std::vector<Field>& fields() {
  using traffic::LaneChangeRule;
  using traffic::LaneChangeVariant;
  static const std::vector<Field> table = {
      quantity("field_length", "length", &SimConfig::field_length),
      quantity("obstacle_position", "length", &SimConfig::obstacle_position),
      integer("obstacle_lane", [](SimConfig& c) -> int& { return c.obstacle_lane; }),
      quantity("obstacle_sight_distance", "length", &SimConfig::obstacle_sight_distance),
      quantity("traffic_load", "rate", &SimConfig::traffic_load),
      quantity("speed_limit", "speed", &SimConfig::speed_limit),
      quantity("dt", "time", &SimConfig::dt),
      quantity("duration", "time", &SimConfig::duration),
      quantity("warm_up", "time", &SimConfig::warm_up),
      {"seed",
       [](SimConfig& c, std::string_view k, std::string_view v) {
         c.seed = parse_u64(k, v);
       },
       [](const SimConfig& c) { return std::to_string(c.seed); }},
      boolean("stop_at_origin", &SimConfig::stop_at_origin),
      boolean("communication_enabled", &SimConfig::communication_enabled),
      boolean("vsl_enabled", &SimConfig::vsl_enabled),
      quantity("beacon_interval", "time", &SimConfig::beacon_interval),
      {"message_origin",
       [](SimConfig& c, std::string_view k, std::string_view v) {
         const auto t = trim(v);
         if (t == "obstacle") {
           c.message_origin = MessageOrigin::kObstacle;
         } else if (t == "first_witness") {
           c.message_origin = MessageOrigin::kFirstWitness;
         } else {
           bad_value(k, v, "obstacle|first_witness");
         }
       },
       [](const SimConfig& c) {
         return std::string(c.message_origin == MessageOrigin::kObstacle
                                ? "obstacle"
                                : "first_witness");
       }},
      quantity("ttl_time", "time", &SimConfig::ttl_time),
      quantity("ttl_distance", "length", &SimConfig::ttl_distance),
      {"policy",
       [](SimConfig& c, std::string_view, std::string_view v) {
         c.policy.kind = dissemination::parse_policy_kind(trim(v));
       },
       [](const SimConfig& c) {
         return std::string(dissemination::to_string(c.policy.kind));
       }},
      nested("alpha", "none", [](SimConfig& c) -> double& { return c.policy.alpha; }),
      {"lane_change_variant",
       [](SimConfig& c, std::string_view k, std::string_view v) {
         const auto t = trim(v);
         if (t == "base") {
           c.lane_change_variant = LaneChangeVariant::kBase;
         } else if (t == "brute_force") {
           c.lane_change_variant = LaneChangeVariant::kBruteForce;
         } else if (t == "proportional") {
           c.lane_change_variant = LaneChangeVariant::kProportional;
         } else {
           bad_value(k, v, "base|brute_force|proportional");
         }
       },
       [](const SimConfig& c) {
         return std::string(variant_name(c.lane_change_variant));
       }},
      {"lane_change_rule",
       [](SimConfig& c, std::string_view k, std::string_view v) {
         const auto t = trim(v);
         if (t == "multiplicative") {
           c.lane_change_rule = LaneChangeRule::kMultiplicative;
         } else if (t == "mobil_additive") {
           c.lane_change_rule = LaneChangeRule::kMobilAdditive;
         } else {
           bad_value(k, v, "multiplicative|mobil_additive");
         }
       },
       [](const SimConfig& c) { return std::string(rule_name(c.lane_change_rule)); }},
      quantity("brute_force_V", "accel", &SimConfig::brute_force_boost),
      quantity("lane_change_cooldown", "time", &SimConfig::lane_change_cooldown),
      quantity("vehicle_length", "length", &SimConfig::vehicle_length),

      nested("driver.max_accel", "accel", [](SimConfig& c) -> double& { return c.driver.max_accel; }),
      nested("driver.comfortable_brake", "accel", [](SimConfig& c) -> double& { return c.driver.comfortable_brake; }),
      nested("driver.time_headway", "time", [](SimConfig& c) -> double& { return c.driver.time_headway; }),
      nested("driver.min_gap", "length", [](SimConfig& c) -> double& { return c.driver.min_gap; }),
      nested("driver.accel_exponent", "none", [](SimConfig& c) -> double& { return c.driver.accel_exponent; }),
      nested("driver.politeness", "none", [](SimConfig& c) -> double& { return c.driver.politeness; }),
      nested("driver.change_threshold", "accel", [](SimConfig& c) -> double& { return c.driver.change_threshold; }),
      nested("driver.lane_bias", "accel", [](SimConfig& c) -> double& { return c.driver.lane_bias; }),
      nested("driver.diff_cap", "none", [](SimConfig& c) -> double& { return c.driver.diff_cap; }),
      nested("driver.vsl_reduction", "speed", [](SimConfig& c) -> double& { return c.driver.vsl_reduction; }),
      nested("driver.safe_brake", "accel", [](SimConfig& c) -> double& { return c.driver.safe_brake; }),

      nested("radio.tx_power", "power", [](SimConfig& c) -> double& { return c.radio.tx_power; }),
      nested("radio.gain_tx", "none", [](SimConfig& c) -> double& { return c.radio.gain_tx; }),
      nested("radio.gain_rx", "none", [](SimConfig& c) -> double& { return c.radio.gain_rx; }),
      nested("radio.wavelength", "length", [](SimConfig& c) -> double& { return c.radio.wavelength; }),
      nested("radio.system_loss", "none", [](SimConfig& c) -> double& { return c.radio.system_loss; }),
      nested("radio.tx_range", "length", [](SimConfig& c) -> double& { return c.radio.tx_range; }),
      nested("radio.interference_range", "length", [](SimConfig& c) -> double& { return c.radio.interference_range; }),
      nested("radio.reception_prob", "none", [](SimConfig& c) -> double& { return c.radio.reception_prob; }),
      integer("radio.backoff_min", [](SimConfig& c) -> int& { return c.radio.backoff_min; }),
      integer("radio.backoff_max", [](SimConfig& c) -> int& { return c.radio.backoff_max; }),
      integer("radio.max_backoff_stage", [](SimConfig& c) -> int& { return c.radio.max_backoff_stage; }),
  };
  return table;
}

void require(bool ok, const char* key, const char* constraint, double value) {
  if (!ok) {
    throw ConfigError(key, std::string(key) + " must be " + constraint +
                               " (got " + format_double(value) + ")");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_quantity(std::string_view key, std::string_view text,
                      std::string_view dimension) {
  std::string_view suffix;
  const double number = parse_number(key, text, &suffix);
  if (dimension == "length") return apply_units(key, text, number, suffix, kLengthUnits);
  if (dimension == "time") return apply_units(key, text, number, suffix, kTimeUnits);
  if (dimension == "speed") return apply_units(key, text, number, suffix, kSpeedUnits);
  if (dimension == "rate") return apply_units(key, text, number, suffix, kRateUnits);
  if (dimension == "power") {
    if (suffix == "dBm") return std::pow(10.0, number / 10.0) * 1e-3;
    return apply_units(key, text, number, suffix, kPowerUnits);
  }
  if (dimension == "accel") return apply_units(key, text, number, suffix, kAccelUnits);
  if (!suffix.empty()) bad_value(key, text, "a dimensionless number");
  return number;
}

void SimConfig::validate() const {
  require(field_length > 0, "field_length", "> 0", field_length);
  require(obstacle_position > 0 && obstacle_position < field_length,
          "obstacle_position", "in (0, field_length)", obstacle_position);
  require(obstacle_lane == 0 || obstacle_lane == 1, "obstacle_lane", "0 or 1",
          obstacle_lane);
  require(obstacle_sight_distance > 0, "obstacle_sight_distance", "> 0",
          obstacle_sight_distance);
  require(traffic_load > 0, "traffic_load", "> 0", traffic_load);
  require(speed_limit > 0, "speed_limit", "> 0", speed_limit);
  require(dt > 0, "dt", "> 0", dt);
  require(duration >= 0, "duration", ">= 0", duration);
  require(warm_up >= 0, "warm_up", ">= 0", warm_up);
  require(beacon_interval > 0, "beacon_interval", "> 0", beacon_interval);
  require(ttl_time > 0, "ttl_time", "> 0", ttl_time);
  require(ttl_distance > 0, "ttl_distance", "> 0", ttl_distance);
  require(policy.alpha > 0, "alpha", "> 0", policy.alpha);
  require(lane_change_cooldown >= 0, "lane_change_cooldown", ">= 0",
          lane_change_cooldown);
  require(vehicle_length > 0, "vehicle_length", "> 0", vehicle_length);
  require(std::isfinite(brute_force_boost), "brute_force_V", "finite",
          brute_force_boost);
  radio.validate();
  try {
    driver_params().validate();
  } catch (const ConfigError& e) {
    const std::string key = "driver." + e.key();
    throw ConfigError(key, "driver." + std::string(e.what()));
  }
}

traffic::DriverParams SimConfig::driver_params() const {
  traffic::DriverParams p = driver;
  p.desired_velocity = speed_limit;
  return p;
}

void set_config_value(SimConfig& cfg, std::string_view key,
                      std::string_view value) {
  const auto& table = fields();
  const auto it = std::find_if(table.begin(), table.end(),
                               [&](const Field& f) { return f.key == key; });
  if (it == table.end()) {
    throw ConfigError(std::string(key),
                      "unknown configuration key '" + std::string(key) + "'");
  }
  it->set(cfg, key, value);
}

SimConfig parse_config(std::string_view text) { return apply_config(SimConfig{}, text); }

SimConfig apply_config(SimConfig cfg, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", "line " + std::to_string(line_no) +
                                ": expected 'key = value', got '" +
                                std::string(line) + "'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = trim(value.substr(1, value.size() - 2));
    }
    set_config_value(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

std::string echo_config(const SimConfig& cfg) {
  std::ostringstream out;
  for (const auto& f : fields()) {
    out << f.key << " = " << f.get(cfg) << '\n';
  }
  return out.str();
}

}  // namespace vanetflow
