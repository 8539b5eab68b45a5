#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "dissemination.hpp"
#include "radio.hpp"
#include "traffic.hpp"

namespace vanetflow {

enum class MessageOrigin { kObstacle, kFirstWitness };

// Full scenario description. SI units; parse_config normalizes suffixes.
struct SimConfig {
  double field_length = 1500.0;
  double obstacle_position = 1000.0;
  int obstacle_lane = 0;
  // Drivers without the warning only react to the obstacle this close.
  double obstacle_sight_distance = 150.0;
  double traffic_load = 4400.0;  // vehicles/hour, both lanes together
  double speed_limit = 120.0 / 3.6;
  double dt = 0.25;
  double duration = 900.0;
  double warm_up = 60.0;
  std::uint64_t seed = 1;
  bool stop_at_origin = false;

  bool communication_enabled = true;
  bool vsl_enabled = false;
  double beacon_interval = 1.0;
  MessageOrigin message_origin = MessageOrigin::kObstacle;
  double ttl_time = 120.0;
  double ttl_distance = 2000.0;
  dissemination::DisseminationPolicy policy{};
  radio::RadioConfig radio{};

  traffic::LaneChangeVariant lane_change_variant =
      traffic::LaneChangeVariant::kProportional;
  traffic::LaneChangeRule lane_change_rule =
      traffic::LaneChangeRule::kMobilAdditive;
  double brute_force_boost = 1.0;  // V
  double lane_change_cooldown = 2.0;
  double vehicle_length = 5.0;
  traffic::DriverParams driver{};  // desired_velocity is taken from speed_limit

  // Throws ConfigError naming the key, its constraint and the value.
  void validate() const;

  // Driver parameters with v0 bound to the speed limit.
  traffic::DriverParams driver_params() const;

  bool operator==(const SimConfig&) const = default;
};

// Parses the line-oriented `key = value` document. Unknown keys, malformed
// values and constraint violations throw ConfigError. Unset keys keep
// their defaults.
SimConfig parse_config(std::string_view text);

// Same document format, applied on top of `base` instead of the defaults.
SimConfig apply_config(SimConfig base, std::string_view text);

// Applies one `key = value` assignment to `cfg` without validating.
void set_config_value(SimConfig& cfg, std::string_view key,
                      std::string_view value);

// Every key with its value in canonical SI form, one `key = value` per line.
// parse_config(echo_config(c)) == c.
std::string echo_config(const SimConfig& cfg);

// Parses a number with an optional unit suffix. `dimension` is one of
// "length", "time", "speed", "rate", "power", "accel", "none".
double parse_quantity(std::string_view key, std::string_view text,
                      std::string_view dimension);

std::string format_double(double v);

}  // namespace vanetflow
