#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "origin_probe.hpp"

namespace vanetflow::metrics {

double end_time(const EventLog& log, const SimConfig& cfg) {
  if (log.events.empty()) return 0.0;
  double last = 0.0;
  for (const auto& e : log.events) last = std::max(last, e.time);
  return last + cfg.dt;
}

ExitSeries exit_series(const EventLog& log, double bin) {
  ExitSeries series;
  if (log.events.empty()) return series;
  double last = 0.0;
  for (const auto& e : log.events) last = std::max(last, e.time);
  const auto bins = static_cast<std::size_t>(std::floor(last / bin)) + 1;
  series.resize(bins);
  std::vector<std::uint64_t> exits(bins, 0);
  std::vector<std::uint64_t> arrivals(bins, 0);
  for (const auto& e : log.events) {
    if (e.kind != EventKind::kExit && e.kind != EventKind::kInjection) continue;
    auto k = static_cast<std::size_t>(std::floor(e.time / bin));
    k = std::min(k, bins - 1);
    (e.kind == EventKind::kExit ? exits : arrivals)[k] += 1;
  }
  std::uint64_t ce = 0;
  std::uint64_t ca = 0;
  for (std::size_t k = 0; k < bins; ++k) {
    ce += exits[k];
    ca += arrivals[k];
    series[k].time_end = double(k + 1) * bin;
    series[k].exits = ce;
    series[k].arrivals = ca;
    series[k].ratio = ca > 0 ? double(ce) / double(ca) : 0.0;
  }
  return series;
}

std::vector<LaneChangeRecord> lane_change_positions(const EventLog& log) {
  std::vector<LaneChangeRecord> out;
  std::unordered_set<std::uint64_t> infected;
  for (const auto& e : log.events) {
    if (e.kind == EventKind::kInfection) {
      infected.insert(e.vehicle_id);
    } else if (e.kind == EventKind::kLaneChange) {
      out.push_back({e.time, e.position, infected.contains(e.vehicle_id), e.lane,
                     static_cast<int>(e.aux)});
    }
  }
  return out;
}

std::vector<LaneChangeRecord> upstream_obstacle_lane_changes(
    const std::vector<LaneChangeRecord>& records, const SimConfig& cfg) {
  std::vector<LaneChangeRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [&](const LaneChangeRecord& r) {
                 return r.from_lane == cfg.obstacle_lane &&
                        r.position < cfg.obstacle_position;
               });
  return out;
}

VelocityGrid::VelocityGrid(double x_bin, double t_bin, std::size_t nx, std::size_t nt)
    : x_bin_(x_bin), t_bin_(t_bin), nx_(nx), nt_(nt), sum_(nx * nt, 0.0), count_(nx * nt, 0) {}

void VelocityGrid::add(double time, double position, double velocity) {
  if (nx_ == 0 || nt_ == 0 || time < 0.0 || position < 0.0) return;
  const auto t = std::min(static_cast<std::size_t>(time / t_bin_), nt_ - 1);
  const auto x = std::min(static_cast<std::size_t>(position / x_bin_), nx_ - 1);
  sum_[t * nx_ + x] += velocity;
  ++count_[t * nx_ + x];
}

std::optional<double> VelocityGrid::mean(std::size_t t, std::size_t x) const {
  const auto n = count_[t * nx_ + x];
  if (n == 0) return std::nullopt;
  return sum_[t * nx_ + x] / double(n);
}

std::size_t VelocityGrid::non_empty_cells() const {
  return static_cast<std::size_t>(
      std::count_if(count_.begin(), count_.end(), [](auto n) { return n > 0; }));
}

VelocityGrid velocity_grid(const EventLog& log, const SimConfig& cfg, double x_bin,
                           double t_bin) {
  const auto nx = static_cast<std::size_t>(std::ceil(cfg.field_length / x_bin - 1e-9));
  const auto nt = static_cast<std::size_t>(std::ceil(end_time(log, cfg) / t_bin - 1e-9));
  VelocityGrid grid(x_bin, t_bin, nx, nt);
  for (const auto& e : log.events) {
    if (e.kind == EventKind::kSample) grid.add(e.time, e.position, e.velocity);
  }
  return grid;
}

std::optional<double> origin_congestion_time(const EventLog& log, const SimConfig& cfg) {
  OriginProbe probe(cfg.warm_up);
  std::optional<double> current;
  for (const auto& e : log.events) {
    if (e.kind != EventKind::kSample) continue;
    if (current && e.time != *current) {
      if (auto t = probe.evaluate(*current)) return t;
    }
    current = e.time;
    probe.add_sample(e.time, e.position, e.velocity);
  }
  if (current) return probe.evaluate(*current);
  return std::nullopt;
}

std::optional<double> gridlock_time(const EventLog& log) {
  for (const auto& e : log.events) {
    if (e.kind == EventKind::kGridlock) return e.time;
  }
  return std::nullopt;
}

RunSummary summarize(const EventLog& log, const SimConfig& cfg) {
  RunSummary s;
  for (const auto& e : log.events) {
    switch (e.kind) {
      case EventKind::kInjection: ++s.arrivals; break;
      case EventKind::kExit: ++s.exits; break;
      case EventKind::kInfection: ++s.infected; break;
      case EventKind::kLaneChange: ++s.lane_changes; break;
      case EventKind::kTransmission: ++s.transmissions; break;
      default: break;
    }
  }
  s.end_time = end_time(log, cfg);
  s.gridlock_time = gridlock_time(log);
  s.origin_congestion_time = origin_congestion_time(log, cfg);
  return s;
}

csv::Table exit_table(const ExitSeries& series, const EventLog& log) {
  csv::Table t;
  t.comments = csv::comment_lines(log.config_echo);
  t.columns = {"time_s", "cumulative_exits", "cumulative_arrivals", "exit_ratio"};
  for (const auto& b : series) {
    t.rows.push_back({b.time_end, double(b.exits), double(b.arrivals), b.ratio});
  }
  return t;
}

csv::Table lane_change_table(const std::vector<LaneChangeRecord>& records,
                             const EventLog& log) {
  csv::Table t;
  t.comments = csv::comment_lines(log.config_echo);
  t.columns = {"time_s", "position_m", "infected", "from_lane", "to_lane"};
  for (const auto& r : records) {
    t.rows.push_back({r.time, r.position, r.infected ? 1.0 : 0.0, double(r.from_lane),
                      double(r.to_lane)});
  }
  return t;
}

csv::Table velocity_grid_table(const VelocityGrid& grid, const EventLog& log) {
  csv::Table t;
  t.comments = csv::comment_lines(log.config_echo);
  t.columns = {"t_bin", "x_bin", "mean_v", "n"};
  for (std::size_t ti = 0; ti < grid.t_bins(); ++ti) {
    for (std::size_t xi = 0; xi < grid.x_bins(); ++xi) {
      const auto m = grid.mean(ti, xi);
      if (!m) continue;
      t.rows.push_back({double(ti) * grid.t_bin_size(), double(xi) * grid.x_bin_size(), *m,
                        double(grid.count(ti, xi))});
    }
  }
  return t;
}

}  // namespace vanetflow::metrics
