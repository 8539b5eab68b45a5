#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "engine.hpp"
#include "errors.hpp"
#include "event_log.hpp"
#include "presets.hpp"

using namespace vanetflow;

namespace {

SimConfig scenario_b(double duration) {
  SimConfig c = find_preset("velocity_motorway")->config;
  c.duration = duration;
  return c;
}

Vehicle parked(std::uint64_t id, int lane, double x, double v = 0.0) {
  Vehicle veh;
  veh.state.id = id;
  veh.state.lane = lane;
  veh.state.position = x;
  veh.state.velocity = v;
  return veh;
}

}  // namespace

TEST_CASE("arrivals follow the configured load") {
  SimConfig cfg;
  cfg.traffic_load = 3600.0;
  cfg.warm_up = 0.0;
  SimState s = initial_state(cfg);
  // Nothing ever moves, so the entry jams and the queue grows.
  for (int i = 0; i < 40000; ++i) {
    s.now += 0.25;
    inject_vehicles(s, cfg, nullptr);
  }
  const double mean_gap = s.now / double(s.generated);
  CHECK(std::fabs(mean_gap - 1.0) < 0.03);
  CHECK(s.arrivals <= 2);
  CHECK(s.queued() == s.generated - s.arrivals);

  SimConfig warm = cfg;
  warm.warm_up = 1e6;
  SimState w = initial_state(warm);
  for (int i = 0; i < 40000; ++i) {
    w.now += 0.25;
    inject_vehicles(w, warm, nullptr);
  }
  CHECK(std::fabs(double(w.generated) / w.now - 0.25) < 0.25 * 0.05);
}

TEST_CASE("gridlock detection") {
  SimConfig cfg;
  SimState s = initial_state(cfg);
  for (int i = 0; i < 15; ++i) s.lanes[i % 2].push_back(parked(i + 1, i % 2, 50.0 + 20.0 * i));
  CHECK(detect_gridlock(s, cfg));
  s.lanes[1][3].state.velocity = 5.0;
  CHECK_FALSE(detect_gridlock(s, cfg));

  SimState few = initial_state(cfg);
  for (int i = 0; i < 3; ++i) few.lanes[0].push_back(parked(i + 1, 0, 100.0 + 20.0 * i));
  CHECK_FALSE(detect_gridlock(few, cfg));
}

TEST_CASE("invariant violations are reported, not repaired") {
  SimConfig cfg;
  SimState s = initial_state(cfg);
  s.lanes[0].push_back(parked(1, 0, 100.0));
  s.lanes[0].push_back(parked(2, 0, 102.0));
  s.arrivals = s.generated = 2;
  CHECK_THROWS_AS(check_invariants(s, cfg), SimulationError);
  s.lanes[0][1].state.position = 200.0;
  CHECK_NOTHROW(check_invariants(s, cfg));
  s.exits = 1;
  CHECK_THROWS_AS(check_invariants(s, cfg), SimulationError);
}

TEST_CASE("zero duration gives an empty log") {
  SimConfig cfg;
  cfg.duration = 0.0;
  const EventLog log = run(cfg);
  CHECK(log.events.empty());
  CHECK(log.config_echo == echo_config(cfg));
}

TEST_CASE("invalid config is rejected before running") {
  SimConfig cfg;
  cfg.dt = 0.0;
  CHECK_THROWS_AS(run(cfg), ConfigError);
}

TEST_CASE("isolated vehicles") {
  SimConfig cfg;
  cfg.traffic_load = 20.0;
  cfg.warm_up = 0.0;
  cfg.duration = 7200.0;
  cfg.communication_enabled = false;
  cfg.lane_change_variant = traffic::LaneChangeVariant::kBase;
  cfg.seed = 3;
  const EventLog log = run(cfg);

  struct Trip {
    double in = -1, out = -1;
    int lane = -1;
    bool changed_before_obstacle = false;
  };
  std::map<std::uint64_t, Trip> trips;
  for (const auto& e : log.events) {
    if (e.kind == EventKind::kInjection) trips[e.vehicle_id] = {e.time, -1, e.lane, false};
    if (e.kind == EventKind::kExit) trips[e.vehicle_id].out = e.time;
    if (e.kind == EventKind::kLaneChange && e.position < cfg.obstacle_position) {
      trips[e.vehicle_id].changed_before_obstacle = true;
    }
  }
  int checked_free = 0;
  int checked_obstacle = 0;
  for (auto it = trips.begin(); it != trips.end(); ++it) {
    const Trip& t = it->second;
    if (t.out < 0) continue;
    bool alone = true;
    for (const auto& [id, other] : trips) {
      if (id == it->first) continue;
      const double other_out = other.out < 0 ? 1e300 : other.out;
      if (other.in < t.out && other_out > t.in) alone = false;
    }
    if (!alone) continue;
    if (t.lane == 1) {
      const double transit = cfg.field_length / cfg.speed_limit;
      CHECK(std::fabs((t.out - t.in) - transit) < 0.02 * transit);
      ++checked_free;
    } else {
      CHECK(t.changed_before_obstacle);
      ++checked_obstacle;
    }
  }
  CHECK(checked_free > 3);
  CHECK(checked_obstacle > 3);
}

TEST_CASE("no communication means no infection") {
  SimConfig cfg = scenario_b(300.0);
  cfg.communication_enabled = false;
  const EventLog log = run(cfg);
  for (const auto& e : log.events) {
    CHECK(e.kind != EventKind::kInfection);
    CHECK(e.kind != EventKind::kReception);
  }

  SUBCASE("radio and policy settings are then irrelevant") {
    SimConfig other = cfg;
    other.policy.kind = dissemination::PolicyKind::kFlooding;
    other.policy.alpha = 2.0;
    other.radio.tx_range = 150.0;
    other.radio.interference_range = 400.0;
    other.radio.reception_prob = 0.5;
    CHECK(run(other).events == log.events);
  }
}

TEST_CASE("same seed, same log") {
  const SimConfig cfg = scenario_b(200.0);
  const EventLog a = run(cfg);
  const EventLog b = run(cfg);
  CHECK(events_to_csv(a) == events_to_csv(b));
  SimConfig other = cfg;
  other.seed = cfg.seed + 1;
  CHECK_FALSE(run(other).events == a.events);
}

TEST_CASE("per-tick properties of a scenario run") {
  SimConfig cfg = scenario_b(300.0);
  cfg.seed = 8;
  Simulation sim(cfg);
  std::map<std::uint64_t, double> last_pos;
  std::set<std::uint64_t> infected;
  std::uint64_t last_infected = 0;
  const double vmax = cfg.speed_limit;
  const double amax = cfg.driver.max_accel;
  while (!sim.finished()) {
    sim.step();
    const SimState& s = sim.state();
    CHECK_NOTHROW(check_invariants(s, cfg));
    std::map<std::uint64_t, double> pos;
    for (const auto& lane : s.lanes) {
      for (const auto& v : lane) {
        pos[v.state.id] = v.state.position;
        if (v.ledger.infected()) infected.insert(v.state.id);
        auto it = last_pos.find(v.state.id);
        if (it != last_pos.end()) {
          const double dx = v.state.position - it->second;
          CHECK(dx >= 0.0);
          CHECK(dx <= vmax * cfg.dt + 0.5 * amax * cfg.dt * cfg.dt + 1e-9);
        }
      }
    }
    CHECK(s.infected_total >= last_infected);
    last_infected = s.infected_total;
    last_pos = std::move(pos);
  }
  CHECK(last_infected > 0);
}
