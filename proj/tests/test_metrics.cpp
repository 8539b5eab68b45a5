#include <cmath>
#include <map>

#include "doctest.h"
#include "engine.hpp"
#include "metrics.hpp"
#include "presets.hpp"

using namespace vanetflow;
using namespace vanetflow::metrics;

namespace {

Event ev(double t, EventKind k, std::uint64_t id, double x = 0.0, double v = 0.0,
         int lane = 0, std::int64_t aux = 0) {
  return {t, k, id, lane, x, v, aux};
}

const EventLog& short_run() {
  static const EventLog log = [] {
    SimConfig c = find_preset("velocity_motorway")->config;
    c.duration = 240.0;
    c.seed = 4;
    return run(c);
  }();
  return log;
}

SimConfig short_cfg() {
  SimConfig c = find_preset("velocity_motorway")->config;
  c.duration = 240.0;
  c.seed = 4;
  return c;
}

}  // namespace

TEST_CASE("exit series") {
  EventLog log;
  SUBCASE("no exits") {
    log.events = {ev(1, EventKind::kInjection, 1), ev(40, EventKind::kInjection, 2)};
    const auto s = exit_series(log);
    REQUIRE(s.size() == 2);
    for (const auto& b : s) CHECK(b.exits == 0);
    CHECK(s[1].arrivals == 2);
  }
  SUBCASE("ratio") {
    for (int i = 0; i < 100; ++i) log.events.push_back(ev(0.1 * i, EventKind::kInjection, i + 1));
    for (int i = 0; i < 50; ++i) log.events.push_back(ev(35.0 + 0.1 * i, EventKind::kExit, i + 1));
    const auto s = exit_series(log);
    REQUIRE(s.size() == 2);
    CHECK(s[0].ratio == 0.0);
    CHECK(s[1].ratio == 0.5);
    CHECK(s[1].time_end == 60.0);
  }
  SUBCASE("recount against a real run") {
    const auto s = exit_series(short_run());
    std::uint64_t prev_e = 0;
    std::uint64_t prev_a = 0;
    for (const auto& b : s) {
      std::uint64_t e = 0;
      std::uint64_t a = 0;
      for (const auto& x : short_run().events) {
        if (x.time >= b.time_end) continue;
        e += x.kind == EventKind::kExit;
        a += x.kind == EventKind::kInjection;
      }
      CHECK(b.exits == e);
      CHECK(b.arrivals == a);
      CHECK(b.exits >= prev_e);
      CHECK(b.arrivals >= prev_a);
      CHECK(b.ratio == (a ? double(e) / double(a) : 0.0));
      prev_e = b.exits;
      prev_a = b.arrivals;
    }
  }
}

TEST_CASE("lane change positions") {
  EventLog log;
  CHECK(lane_change_positions(log).empty());
  log.events = {ev(1, EventKind::kInfection, 3, 500, 20, 0, 1),
                ev(2, EventKind::kLaneChange, 3, 520, 20, 0, 1),
                ev(3, EventKind::kLaneChange, 4, 1100, 20, 0, 1),
                ev(4, EventKind::kLaneChange, 5, 900, 20, 1, 0)};
  const auto all = lane_change_positions(log);
  REQUIRE(all.size() == 3);
  CHECK(all[0].infected);
  CHECK_FALSE(all[1].infected);
  SimConfig cfg;
  const auto up = upstream_obstacle_lane_changes(all, cfg);
  REQUIRE(up.size() == 1);
  CHECK(up[0].position == 520);

  std::size_t n = 0;
  for (const auto& e : short_run().events) n += e.kind == EventKind::kLaneChange;
  CHECK(lane_change_positions(short_run()).size() == n);
  for (const auto& r : upstream_obstacle_lane_changes(lane_change_positions(short_run()), cfg)) {
    CHECK(r.position < cfg.obstacle_position);
  }
}

TEST_CASE("velocity grid") {
  SimConfig cfg;
  SUBCASE("constant speed vehicle") {
    EventLog log;
    for (int i = 0; i * 0.25 < 60.0; ++i) {
      log.events.push_back(ev(i * 0.25, EventKind::kSample, 1, 20.0 * i * 0.25, 20.0));
    }
    const auto g = velocity_grid(log, cfg);
    std::size_t visited = 0;
    for (std::size_t t = 0; t < g.t_bins(); ++t) {
      for (std::size_t x = 0; x < g.x_bins(); ++x) {
        if (auto m = g.mean(t, x)) {
          CHECK(*m == 20.0);
          ++visited;
        }
      }
    }
    CHECK(visited == g.non_empty_cells());
    CHECK(visited > 0);
    CHECK_FALSE(g.mean(0, 140));
  }
  SUBCASE("brute-force recount") {
    const SimConfig c = short_cfg();
    const auto g = velocity_grid(short_run(), c);
    std::map<std::pair<std::size_t, std::size_t>, std::pair<double, long>> cells;
    for (const auto& e : short_run().events) {
      if (e.kind != EventKind::kSample) continue;
      const auto t = static_cast<std::size_t>(std::floor(e.time / 30.0));
      const auto x = std::min<std::size_t>(static_cast<std::size_t>(std::floor(e.position / 10.0)),
                                           g.x_bins() - 1);
      cells[{t, x}].first += e.velocity;
      cells[{t, x}].second += 1;
    }
    CHECK(cells.size() == g.non_empty_cells());
    for (const auto& [key, acc] : cells) {
      const auto m = g.mean(key.first, key.second);
      REQUIRE(m);
      CHECK(std::fabs(*m - acc.first / double(acc.second)) < 1e-9);
      CHECK(*m >= 0.0);
      CHECK(*m <= c.speed_limit + 1e-9);
    }
    CHECK(velocity_grid_table(g, short_run()).rows.size() == g.non_empty_cells());
  }
}

TEST_CASE("metrics are pure") {
  const SimConfig c = short_cfg();
  const auto a = summarize(short_run(), c);
  const auto b = summarize(short_run(), c);
  CHECK(a.exits == b.exits);
  CHECK(a.arrivals == b.arrivals);
  CHECK(exit_table(exit_series(short_run()), short_run()) ==
        exit_table(exit_series(short_run()), short_run()));
  CHECK(a.end_time == doctest::Approx(240.0));
}

TEST_CASE("origin congestion time") {
  SimConfig cfg;
  cfg.warm_up = 0.0;
  EventLog log;
  for (int i = 0; i < 200; ++i) {
    const double t = i * 0.25;
    log.events.push_back(ev(t, EventKind::kSample, 1, 50.0, t < 20.0 ? 20.0 : 1.0));
  }
  const auto t = origin_congestion_time(log, cfg);
  REQUIRE(t);
  // The 10 s window mean falls below 5 m/s once 3/4 of it is slow.
  CHECK(*t > 20.0);
  CHECK(*t < 30.0);

  EventLog fast;
  for (int i = 0; i < 200; ++i) fast.events.push_back(ev(i * 0.25, EventKind::kSample, 1, 50.0, 20.0));
  CHECK_FALSE(origin_congestion_time(fast, cfg));
}
