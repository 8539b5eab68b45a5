#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "config.hpp"
#include "dissemination.hpp"
#include "event_log.hpp"
#include "origin_probe.hpp"
#include "radio.hpp"
#include "random.hpp"
#include "traffic.hpp"

namespace vanetflow {

inline constexpr int kLaneCount = 2;
inline constexpr std::uint64_t kObstacleId = 0;
inline constexpr std::uint64_t kWarningMessageId = 1;
inline constexpr double kWarmUpLoadFactor = 0.25;
inline constexpr double kGridlockSpeed = 0.1;   // m/s
inline constexpr std::size_t kGridlockMinVehicles = 10;

struct Vehicle {
  traffic::VehicleState state;
  dissemination::MessageLedger ledger;
  radio::MacState mac;
  double last_lane_change = -1e300;
};

struct Transmission {
  std::uint64_t sender_id = 0;
  int lane = 0;
  double position = 0.0;
  dissemination::WarningMessage message;
};

struct PendingArrival {
  double time = 0.0;
  int preferred_lane = 0;
};

struct SimState {
  double now = 0.0;
  std::uint64_t tick = 0;
  // Each lane sorted by ascending position.
  std::array<std::vector<Vehicle>, kLaneCount> lanes;
  // Arrivals waiting for an entry gap, oldest first.
  std::deque<PendingArrival> entry_queue;
  double next_arrival = 0.0;
  int next_preferred_lane = 0;
  std::uint64_t generated = 0;  // Poisson arrivals, queued or inserted
  std::uint64_t arrivals = 0;   // vehicles inserted on the road
  std::uint64_t exits = 0;
  std::uint64_t infected_total = 0;
  std::uint64_t next_id = 1;
  double next_beacon = 0.0;
  std::optional<double> gridlock_time;
  std::optional<double> origin_congested_time;
  Rng arrival_rng;
  Rng radio_rng;

  std::size_t vehicles_on_road() const;
  std::size_t queued() const;
};

SimState initial_state(const SimConfig& cfg);

// Poisson arrivals at the traffic load (25% during warm-up), alternating
// lane preference. Arrivals enter in order, in the preferred lane or else the
// other one, when the entry gap allows; the rest wait in the queue.
void inject_vehicles(SimState& state, const SimConfig& cfg, EventLog* log);

// Every vehicle upstream of the obstacle nearly stopped, and at least
// kGridlockMinVehicles of them.
bool detect_gridlock(const SimState& state, const SimConfig& cfg);

// Throws SimulationError with a diagnostic dump on overlap or a broken
// conservation count.
void check_invariants(const SimState& state, const SimConfig& cfg);

// One dt of the coupled loop.
class Simulation {
 public:
  explicit Simulation(SimConfig cfg);

  void step();
  bool finished() const;
  void run_to_end();

  const SimState& state() const { return state_; }
  const SimConfig& config() const { return cfg_; }
  const EventLog& log() const { return log_; }
  EventLog take_log() { return std::move(log_); }

 private:
  void record_samples();
  void beacon_and_mac(std::vector<Transmission>& txs);
  void deliver(const std::vector<Transmission>& txs);
  void lane_changes();
  void integrate();
  void remove_exits();

  SimConfig cfg_;
  traffic::DriverParams params_;
  SimState state_;
  EventLog log_;
  OriginProbe probe_;
};

// Validates the config, steps until duration (or origin congestion with
// stop_at_origin) and returns the complete log.
EventLog run(const SimConfig& cfg);

}  // namespace vanetflow
