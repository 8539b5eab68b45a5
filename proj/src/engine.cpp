#include "engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace vanetflow {

using traffic::kNoVehicle;
using traffic::Neighborhood;

namespace {

double arrival_rate(const SimConfig& cfg, double now) {
  const double rate = cfg.traffic_load / 3600.0;
  return now < cfg.warm_up ? rate * kWarmUpLoadFactor : rate;
}

double draw_interarrival(Rng& rng, double rate) {
  return -std::log1p(-uniform01(rng)) / rate;
}

bool upstream_of_obstacle(const traffic::VehicleState& v, const SimConfig& cfg) {
  return v.position < cfg.obstacle_position;
}

// True when the vehicle body would overlap the obstacle in its lane.
bool straddles_obstacle(double position, double length, const SimConfig& cfg) {
  return position >= cfg.obstacle_position &&
         position - length < cfg.obstacle_position;
}

// Leader and follower of a vehicle at `pos` in `lane`. `self` is the index of
// the vehicle in `vehicles` when it already drives in that lane. The obstacle
// counts as a leader when it is within `sight`.
Neighborhood lane_neighborhood(const std::vector<Vehicle>& vehicles, int lane,
                               double pos, double length,
                               std::optional<std::size_t> self,
                               const SimConfig& cfg, double sight) {
  Neighborhood nb;
  std::size_t leader_idx;
  std::size_t follower_end;  // one past the follower index
  if (self) {
    leader_idx = *self + 1;
    follower_end = *self;
  } else {
    const auto it = std::upper_bound(
        vehicles.begin(), vehicles.end(), pos,
        [](double x, const Vehicle& v) { return x < v.state.position; });
    leader_idx = static_cast<std::size_t>(it - vehicles.begin());
    follower_end = leader_idx;
  }
  if (leader_idx < vehicles.size()) {
    const auto& l = vehicles[leader_idx].state;
    nb.leader_gap = l.position - l.length - pos;
    nb.leader_velocity = l.velocity;
  }
  if (lane == cfg.obstacle_lane && pos < cfg.obstacle_position) {
    const double gap = cfg.obstacle_position - pos;
    if (gap <= sight && gap < nb.leader_gap) {
      nb.leader_gap = gap;
      nb.leader_velocity = 0.0;
    }
  }
  if (follower_end > 0) {
    const auto& f = vehicles[follower_end - 1].state;
    nb.follower_gap = pos - length - f.position;
    nb.follower_velocity = f.velocity;
  }
  return nb;
}

std::string dump_lane(const SimState& s, int lane) {
  std::ostringstream out;
  out << "lane " << lane << ":";
  for (const auto& v : s.lanes[lane]) {
    out << " [id=" << v.state.id << " x=" << v.state.position
        << " v=" << v.state.velocity << "]";
  }
  return out.str();
}

}  // namespace

std::size_t SimState::vehicles_on_road() const {
  std::size_t n = 0;
  for (const auto& l : lanes) n += l.size();
  return n;
}

std::size_t SimState::queued() const { return entry_queue.size(); }

SimState initial_state(const SimConfig& cfg) {
  SimState s;
  s.arrival_rng = make_stream(cfg.seed, 0);
  s.radio_rng = make_stream(cfg.seed, 1);
  s.next_arrival = draw_interarrival(s.arrival_rng, arrival_rate(cfg, 0.0));
  return s;
}

namespace {

// Entry speed for `lane`, or nullopt when the entry gap is too short.
std::optional<double> entry_velocity(const std::vector<Vehicle>& lane, int l,
                                     const traffic::DriverParams& params,
                                     const SimConfig& cfg) {
  Neighborhood nb = lane_neighborhood(lane, l, 0.0, cfg.vehicle_length, std::nullopt, cfg,
                                      cfg.obstacle_sight_distance);
  // A vehicle still standing on the entry point leads too.
  if (!lane.empty() && lane.front().state.position - lane.front().state.length < nb.leader_gap) {
    nb.leader_gap = lane.front().state.position - lane.front().state.length;
    nb.leader_velocity = lane.front().state.velocity;
  }
  // Leader-safe speed: fast enough to keep up, slow enough to brake
  // comfortably down to the leader's speed within the free gap.
  double v = params.desired_velocity;
  if (std::isinf(nb.leader_gap)) return v;
  const double slack = nb.leader_gap - params.min_gap;
  if (slack < 0.0) return std::nullopt;
  v = std::min(v, std::sqrt(nb.leader_velocity * nb.leader_velocity +
                            2.0 * params.comfortable_brake * slack));
  if (nb.leader_gap < params.min_gap + v * params.time_headway) return std::nullopt;
  return v;
}

}  // namespace

void inject_vehicles(SimState& state, const SimConfig& cfg, EventLog* log) {
  while (state.next_arrival <= state.now) {
    state.entry_queue.push_back({state.next_arrival, state.next_preferred_lane});
    state.next_preferred_lane = 1 - state.next_preferred_lane;
    ++state.generated;
    state.next_arrival += draw_interarrival(state.arrival_rng, arrival_rate(cfg, state.now));
  }

  const traffic::DriverParams params = cfg.driver_params();
  std::array<bool, kLaneCount> used{};
  while (!state.entry_queue.empty()) {
    const int preferred = state.entry_queue.front().preferred_lane;
    std::optional<double> v;
    int l = preferred;
    for (int candidate : {preferred, 1 - preferred}) {
      if (used[candidate]) continue;
      v = entry_velocity(state.lanes[candidate], candidate, params, cfg);
      if (v) {
        l = candidate;
        break;
      }
    }
    if (!v) break;

    auto& lane = state.lanes[l];
    Vehicle veh;
    veh.state.id = state.next_id++;
    veh.state.lane = l;
    veh.state.position = 0.0;
    veh.state.velocity = *v;
    veh.state.length = cfg.vehicle_length;
    veh.state.params = params;
    lane.insert(lane.begin(), std::move(veh));
    state.entry_queue.pop_front();
    used[l] = true;
    ++state.arrivals;
    if (log) {
      log->events.push_back({state.now, EventKind::kInjection, lane.front().state.id, l, 0.0,
                             *v, 0});
    }
  }
}

bool detect_gridlock(const SimState& state, const SimConfig& cfg) {
  std::size_t upstream = 0;
  for (const auto& lane : state.lanes) {
    for (const auto& v : lane) {
      if (!upstream_of_obstacle(v.state, cfg)) continue;
      if (v.state.velocity >= kGridlockSpeed) return false;
      ++upstream;
    }
  }
  return upstream >= kGridlockMinVehicles;
}

void check_invariants(const SimState& state, const SimConfig& cfg) {
  for (int l = 0; l < kLaneCount; ++l) {
    const auto& lane = state.lanes[l];
    for (std::size_t i = 0; i < lane.size(); ++i) {
      const auto& v = lane[i].state;
      if (!(v.velocity >= 0.0) || v.lane != l) {
        throw SimulationError("invalid vehicle state id=" + std::to_string(v.id) +
                              " at t=" + std::to_string(state.now) + "\n" +
                              dump_lane(state, l));
      }
      if (l == cfg.obstacle_lane && straddles_obstacle(v.position, v.length, cfg)) {
        throw SimulationError("vehicle " + std::to_string(v.id) +
                              " overlaps the obstacle at t=" +
                              std::to_string(state.now) + "\n" + dump_lane(state, l));
      }
      if (i + 1 < lane.size()) {
        const auto& leader = lane[i + 1].state;
        if (!(leader.position - leader.length - v.position > 0.0)) {
          throw SimulationError(
              "overlap between vehicles " + std::to_string(v.id) + " and " +
              std::to_string(leader.id) + " at t=" + std::to_string(state.now) +
              "\n" + dump_lane(state, l));
        }
      }
    }
  }
  const std::size_t on_road = state.vehicles_on_road();
  if (state.arrivals != state.exits + on_road ||
      state.generated != state.arrivals + state.queued()) {
    throw SimulationError(
        "vehicle conservation broken at t=" + std::to_string(state.now) +
        ": generated=" + std::to_string(state.generated) +
        " arrivals=" + std::to_string(state.arrivals) +
        " exits=" + std::to_string(state.exits) +
        " on_road=" + std::to_string(on_road) +
        " queued=" + std::to_string(state.queued()));
  }
}

namespace {

SimConfig validated(SimConfig cfg) {
  cfg.validate();
  return cfg;
}

}  // namespace

Simulation::Simulation(SimConfig cfg)
    : cfg_(validated(std::move(cfg))),
      params_(cfg_.driver_params()),
      state_(initial_state(cfg_)),
      probe_(cfg_.warm_up) {
  log_.config_echo = echo_config(cfg_);
}

bool Simulation::finished() const {
  const auto total_ticks = static_cast<std::uint64_t>(std::llround(cfg_.duration / cfg_.dt));
  if (state_.tick >= total_ticks) return true;
  return cfg_.stop_at_origin && state_.origin_congested_time.has_value();
}

void Simulation::run_to_end() {
  while (!finished()) step();
}

void Simulation::record_samples() {
  const double now = state_.now;
  bool any = false;
  for (int l = 0; l < kLaneCount; ++l) {
    for (const auto& v : state_.lanes[l]) {
      log_.events.push_back({now, EventKind::kSample, v.state.id, l,
                             v.state.position, v.state.velocity, 0});
      probe_.add_sample(now, v.state.position, v.state.velocity);
      any = true;
    }
  }
  if (any && !state_.origin_congested_time) {
    if (const auto t = probe_.evaluate(now)) {
      state_.origin_congested_time = *t;
      log_.events.push_back({now, EventKind::kOriginCongested, 0, 0, 0.0, 0.0, 0});
    }
  }
  if (!state_.gridlock_time && detect_gridlock(state_, cfg_)) {
    state_.gridlock_time = now;
    std::int64_t upstream = 0;
    for (const auto& lane : state_.lanes) {
      for (const auto& v : lane) upstream += upstream_of_obstacle(v.state, cfg_);
    }
    log_.events.push_back({now, EventKind::kGridlock, 0, cfg_.obstacle_lane,
                           cfg_.obstacle_position, 0.0, upstream});
  }
}

void Simulation::beacon_and_mac(std::vector<Transmission>& txs) {
  const double now = state_.now;
  // Carrier sense within the tick: a transmission keeps everything in
  // interference range busy for the rest of the tick.
  std::vector<double> busy;

  if (now + 1e-9 >= state_.next_beacon) {
    state_.next_beacon += cfg_.beacon_interval;
    dissemination::WarningMessage msg;
    msg.msg_id = kWarningMessageId;
    msg.origin_position = cfg_.obstacle_position;
    msg.created_at = now;
    msg.ttl_time = cfg_.ttl_time;
    msg.ttl_distance = cfg_.ttl_distance;

    std::optional<Transmission> beacon;
    if (cfg_.message_origin == MessageOrigin::kObstacle) {
      beacon = Transmission{kObstacleId, cfg_.obstacle_lane, cfg_.obstacle_position, msg};
    } else {
      // The nearest vehicle queued behind the obstacle reports it once it is
      // within radio range of it.
      const auto& lane = state_.lanes[cfg_.obstacle_lane];
      for (auto it = lane.rbegin(); it != lane.rend(); ++it) {
        if (!upstream_of_obstacle(it->state, cfg_)) continue;
        if (cfg_.obstacle_position - it->state.position <= cfg_.radio.tx_range) {
          beacon = Transmission{it->state.id, cfg_.obstacle_lane, it->state.position, msg};
        }
        break;
      }
    }
    if (beacon) {
      txs.push_back(*beacon);
      busy.push_back(beacon->position);
      log_.events.push_back({now, EventKind::kTransmission, beacon->sender_id,
                             beacon->lane, beacon->position, 0.0,
                             static_cast<std::int64_t>(msg.msg_id)});
    }
  }

  for (int l = 0; l < kLaneCount; ++l) {
    for (auto& v : state_.lanes[l]) {
      if (!v.mac.pending_message) continue;
      const std::uint64_t msg_id = *v.mac.pending_message;
      const bool is_busy = radio::medium_busy(v.state.position, busy, cfg_.radio);
      const radio::MacTick tick = radio::mac_tick(v.mac, is_busy, cfg_.radio, state_.radio_rng);
      v.mac = tick.state;
      if (!tick.transmit_now) continue;
      const auto* entry = v.ledger.find(msg_id);
      if (entry == nullptr ||
          !dissemination::ttl_alive(entry->message, now, v.state.position)) {
        continue;
      }
      txs.push_back({v.state.id, l, v.state.position, entry->message});
      busy.push_back(v.state.position);
      log_.events.push_back({now, EventKind::kTransmission, v.state.id, l,
                             v.state.position, v.state.velocity,
                             static_cast<std::int64_t>(msg_id)});
    }
  }
}

void Simulation::deliver(const std::vector<Transmission>& txs) {
  struct Reception {
    int lane;
    std::size_t index;
    double distance;
    std::uint64_t msg_id;
  };
  std::vector<Reception> receptions;
  const double now = state_.now;
  const double range = cfg_.radio.tx_range;

  for (const auto& tx : txs) {
    for (int l = 0; l < kLaneCount; ++l) {
      auto& lane = state_.lanes[l];
      auto first = std::lower_bound(
          lane.begin(), lane.end(), tx.position - range,
          [](const Vehicle& v, double x) { return v.state.position < x; });
      for (auto it = first; it != lane.end() && it->state.position <= tx.position + range; ++it) {
        Vehicle& v = *it;
        if (v.state.id == tx.sender_id) continue;
        const double my_pos = v.state.position;
        if (!dissemination::ttl_alive(tx.message, now, my_pos)) continue;
        const double d = std::abs(my_pos - tx.position);
        if (!radio::receive_roll(d, cfg_.radio, state_.radio_rng)) continue;

        double sender_pos = tx.position;
        if (sender_pos == my_pos) {
          // Side by side: break the tie by id so direction counts stay defined.
          sender_pos = std::nextafter(sender_pos, tx.sender_id > v.state.id ? 1e300 : -1e300);
        }
        const bool first_contact = !v.ledger.infected();
        v.ledger = dissemination::record_reception(std::move(v.ledger), tx.message,
                                                   sender_pos, my_pos, now);
        log_.events.push_back({now, EventKind::kReception, v.state.id, l, my_pos,
                               v.state.velocity,
                               static_cast<std::int64_t>(tx.message.msg_id)});
        if (first_contact) {
          v.state.infected = true;
          ++state_.infected_total;
          log_.events.push_back({now, EventKind::kInfection, v.state.id, l, my_pos,
                                 v.state.velocity,
                                 static_cast<std::int64_t>(tx.message.msg_id)});
        }
        receptions.push_back({l, static_cast<std::size_t>(it - lane.begin()), d,
                              tx.message.msg_id});
      }
    }
  }

  // All receptions of the tick are counted before any relay decision.
  for (const auto& rx : receptions) {
    Vehicle& v = state_.lanes[rx.lane][rx.index];
    if (v.mac.pending_message) continue;
    auto* entry = v.ledger.find(rx.msg_id);
    const dissemination::ReceptionGeometry geo{rx.distance, range, v.state.position};
    if (dissemination::should_rebroadcast(cfg_.policy, *entry, geo, now, state_.radio_rng)) {
      v.mac.pending_message = rx.msg_id;
      v.mac.backoff_remaining = 0;
      entry->has_rebroadcast = true;
    }
  }
}

void Simulation::lane_changes() {
  using traffic::LaneChangeVariant;
  struct Intent {
    int from;
    std::uint64_t id;
    double position;
  };
  std::vector<Intent> intents;
  const double now = state_.now;

  for (int l = 0; l < kLaneCount; ++l) {
    const int to = 1 - l;
    const auto& lane = state_.lanes[l];
    for (std::size_t i = 0; i < lane.size(); ++i) {
      const Vehicle& veh = lane[i];
      const auto& s = veh.state;
      if (now - veh.last_lane_change < cfg_.lane_change_cooldown) continue;
      if (to == cfg_.obstacle_lane && straddles_obstacle(s.position, s.length, cfg_)) continue;

      // The warning tells the driver where the obstacle is.
      const double sight = s.infected ? kNoVehicle : cfg_.obstacle_sight_distance;
      const Neighborhood current =
          lane_neighborhood(lane, l, s.position, s.length, i, cfg_, sight);
      const Neighborhood target = lane_neighborhood(state_.lanes[to], to, s.position,
                                                    s.length, std::nullopt, cfg_, sight);
      if (target.follower_gap < s.params.min_gap || !(target.leader_gap > 0.0)) continue;

      traffic::DriverParams p = s.params;
      p.desired_velocity = traffic::effective_desired_velocity(s, cfg_.vsl_enabled);
      const auto direction = l == 0 ? traffic::LaneDirection::kToFastLane
                                    : traffic::LaneDirection::kToSlowLane;
      const double my_adv = traffic::my_advantage(current, target, s.velocity, p, direction);
      const double oth = traffic::others_disadvantage(current, target, s);

      const bool informed_variant = s.infected && l == cfg_.obstacle_lane &&
                                    upstream_of_obstacle(s, cfg_);
      bool change = false;
      if (!informed_variant || cfg_.lane_change_variant == LaneChangeVariant::kBase) {
        change = traffic::base_lane_change(my_adv, oth, p, cfg_.lane_change_rule);
      } else if (cfg_.lane_change_variant == LaneChangeVariant::kBruteForce) {
        change = traffic::brute_force_lane_change(my_adv, cfg_.brute_force_boost, oth, p,
                                                  cfg_.lane_change_rule);
      } else {
        const double diff = traffic::diff_incentive(s.position, cfg_.obstacle_position, p);
        change = traffic::proportional_lane_change(my_adv, diff, oth, p, cfg_.lane_change_rule);
      }
      if (change && traffic::lane_change_safe(target, s)) {
        intents.push_back({l, s.id, s.position});
      }
    }
  }

  // Downstream vehicles go first; upstream ones re-check against the
  // already updated lanes and defer on conflict.
  std::sort(intents.begin(), intents.end(), [](const Intent& a, const Intent& b) {
    return a.position != b.position ? a.position > b.position : a.id < b.id;
  });
  for (const Intent& in : intents) {
    const int to = 1 - in.from;
    auto& from_lane = state_.lanes[in.from];
    auto& to_lane = state_.lanes[to];
    const auto it = std::find_if(from_lane.begin(), from_lane.end(),
                                 [&](const Vehicle& v) { return v.state.id == in.id; });
    const auto& s = it->state;
    const Neighborhood target =
        lane_neighborhood(to_lane, to, s.position, s.length, std::nullopt, cfg_,
                          cfg_.obstacle_sight_distance);
    if (target.follower_gap < s.params.min_gap || !(target.leader_gap > 0.0) ||
        !traffic::lane_change_safe(target, s)) {
      continue;
    }
    Vehicle moved = std::move(*it);
    from_lane.erase(it);
    moved.state.lane = to;
    moved.last_lane_change = now;
    log_.events.push_back({now, EventKind::kLaneChange, moved.state.id, in.from,
                           moved.state.position, moved.state.velocity, to});
    const auto pos = std::upper_bound(
        to_lane.begin(), to_lane.end(), moved.state.position,
        [](double x, const Vehicle& v) { return x < v.state.position; });
    to_lane.insert(pos, std::move(moved));
  }
}

void Simulation::integrate() {
  std::array<std::vector<double>, kLaneCount> accel;
  for (int l = 0; l < kLaneCount; ++l) {
    const auto& lane = state_.lanes[l];
    accel[l].resize(lane.size());
    for (std::size_t i = 0; i < lane.size(); ++i) {
      const auto& s = lane[i].state;
      const Neighborhood nb = lane_neighborhood(lane, l, s.position, s.length, i, cfg_,
                                                cfg_.obstacle_sight_distance);
      const double v0 = traffic::effective_desired_velocity(s, cfg_.vsl_enabled);
      try {
        accel[l][i] = traffic::lane_acceleration(s.velocity, nb, s.params, v0);
      } catch (const DomainError& e) {
        throw SimulationError(std::string(e.what()) + " (vehicle " + std::to_string(s.id) +
                              " at t=" + std::to_string(state_.now) + ")\n" +
                              dump_lane(state_, l));
      }
    }
  }
  for (int l = 0; l < kLaneCount; ++l) {
    auto& lane = state_.lanes[l];
    for (std::size_t i = 0; i < lane.size(); ++i) {
      lane[i].state = traffic::integrate_kinematics(lane[i].state, accel[l][i], cfg_.dt);
    }
  }
}

void Simulation::remove_exits() {
  for (int l = 0; l < kLaneCount; ++l) {
    auto& lane = state_.lanes[l];
    for (auto& v : lane) {
      if (v.state.position > cfg_.obstacle_position) v.state.passed_obstacle = true;
    }
    while (!lane.empty() && lane.back().state.position > cfg_.field_length) {
      const auto& s = lane.back().state;
      log_.events.push_back({state_.now, EventKind::kExit, s.id, l, s.position, s.velocity, 0});
      ++state_.exits;
      lane.pop_back();
    }
  }
}

void Simulation::step() {
  record_samples();
  if (cfg_.communication_enabled) {
    std::vector<Transmission> txs;
    beacon_and_mac(txs);
    deliver(txs);
  }
  lane_changes();
  integrate();
  remove_exits();
  inject_vehicles(state_, cfg_, &log_);
  check_invariants(state_, cfg_);
  ++state_.tick;
  state_.now = static_cast<double>(state_.tick) * cfg_.dt;
}

EventLog run(const SimConfig& cfg) {
  cfg.validate();
  Simulation sim(cfg);
  sim.run_to_end();
  return sim.take_log();
}

}  // namespace vanetflow
