#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "config.hpp"

namespace vanetflow {

// A named experiment. `config` is the communication arm; the paired control
// run is the same config with communication disabled.
struct ScenarioPreset {
  std::string_view name;
  std::string_view description;
  SimConfig config;

  SimConfig control() const {
    SimConfig c = config;
    c.communication_enabled = false;
    return c;
  }
};

std::span<const ScenarioPreset> presets();
const ScenarioPreset* find_preset(std::string_view name);

}  // namespace vanetflow
