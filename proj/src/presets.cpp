#include "presets.hpp"

#include <vector>

namespace vanetflow {

namespace {

// Motorway obstacle scenario: 4400 veh/h, 120 km/h, 100 m radio range,
// mixed dissemination and the proportional lane-change variant.
SimConfig scenario_b() {
  SimConfig c;
  c.traffic_load = 4400.0;
  c.speed_limit = 120.0 / 3.6;
  c.radio.tx_range = 100.0;
  c.radio.interference_range = 200.0;
  c.policy.kind = dissemination::PolicyKind::kMixed;
  c.lane_change_variant = traffic::LaneChangeVariant::kProportional;
  c.duration = 900.0;
  // Two-lane capacity must exceed the demand away from the obstacle.
  c.driver.time_headway = 0.8;
  c.policy.alpha = 0.3;
  return c;
}

std::vector<ScenarioPreset> build() {
  std::vector<ScenarioPreset> out;

  SimConfig motorway = scenario_b();
  out.push_back({"velocity_motorway",
                 "15 min exit aggregate at motorway speed (120 km/h, 4400 veh/h)",
                 motorway});

  SimConfig urban = scenario_b();
  urban.speed_limit = 50.0 / 3.6;
  urban.traffic_load = 2600.0;
  out.push_back({"velocity_urban",
                 "15 min exit aggregate at urban speed (50 km/h, 2600 veh/h)", urban});

  out.push_back({"lane_change_position",
                 "lane-change locations with and without communication (scenario B)",
                 scenario_b()});

  SimConfig protocols = scenario_b();
  protocols.stop_at_origin = true;
  protocols.duration = 1200.0;
  out.push_back({"protocol_comparison",
                 "run until congestion reaches the origin; compare --policy choices",
                 protocols});

  SimConfig grid = scenario_b();
  grid.duration = 600.0;
  out.push_back({"velocity_grid",
                 "10 min space-time velocity grid (10 m x 30 s cells)", grid});
  return out;
}

}  // namespace

std::span<const ScenarioPreset> presets() {
  static const std::vector<ScenarioPreset> table = build();
  return table;
}

const ScenarioPreset* find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

}  // namespace vanetflow
