#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "config.hpp"
#include "csv.hpp"
#include "event_log.hpp"

namespace vanetflow::metrics {

// Every function here is a pure function of the event log.

struct ExitBin {
  double time_end = 0.0;  // bin covers [time_end - bin, time_end)
  std::uint64_t exits = 0;     // cumulative
  std::uint64_t arrivals = 0;  // cumulative
  double ratio = 0.0;          // exits / arrivals, 0 before the first arrival
};

using ExitSeries = std::vector<ExitBin>;

inline constexpr double kDefaultExitBin = 30.0;

// Cumulative counts per bin, up to the bin holding the last event.
ExitSeries exit_series(const EventLog& log, double bin = kDefaultExitBin);

struct LaneChangeRecord {
  double time = 0.0;
  double position = 0.0;
  bool infected = false;
  int from_lane = 0;
  int to_lane = 0;
};

std::vector<LaneChangeRecord> lane_change_positions(const EventLog& log);

// Changes out of the obstacle lane upstream of the obstacle.
std::vector<LaneChangeRecord> upstream_obstacle_lane_changes(
    const std::vector<LaneChangeRecord>& records, const SimConfig& cfg);

class VelocityGrid {
 public:
  VelocityGrid(double x_bin, double t_bin, std::size_t nx, std::size_t nt);

  double x_bin_size() const { return x_bin_; }
  double t_bin_size() const { return t_bin_; }
  std::size_t x_bins() const { return nx_; }
  std::size_t t_bins() const { return nt_; }

  void add(double time, double position, double velocity);
  std::uint64_t count(std::size_t t, std::size_t x) const { return count_[t * nx_ + x]; }
  // Empty cells have no value, distinct from 0 m/s.
  std::optional<double> mean(std::size_t t, std::size_t x) const;
  std::size_t non_empty_cells() const;

 private:
  double x_bin_;
  double t_bin_;
  std::size_t nx_;
  std::size_t nt_;
  std::vector<double> sum_;
  std::vector<std::uint64_t> count_;
};

inline constexpr double kDefaultGridXBin = 10.0;
inline constexpr double kDefaultGridTBin = 30.0;

VelocityGrid velocity_grid(const EventLog& log, const SimConfig& cfg,
                           double x_bin = kDefaultGridXBin,
                           double t_bin = kDefaultGridTBin);

// Time at which the mean velocity over [0, 100 m] first drops below 5 m/s
// (10 s trailing window, after warm-up); nullopt if it never does.
std::optional<double> origin_congestion_time(const EventLog& log, const SimConfig& cfg);

std::optional<double> gridlock_time(const EventLog& log);

struct RunSummary {
  std::uint64_t arrivals = 0;
  std::uint64_t exits = 0;
  std::uint64_t infected = 0;
  std::uint64_t lane_changes = 0;
  std::uint64_t transmissions = 0;
  double end_time = 0.0;
  std::optional<double> gridlock_time;
  std::optional<double> origin_congestion_time;
};

RunSummary summarize(const EventLog& log, const SimConfig& cfg);

// One tick past the last sample; 0 for an empty log.
double end_time(const EventLog& log, const SimConfig& cfg);

// Tables in the output-file layouts. Each carries the config echo.
csv::Table exit_table(const ExitSeries& series, const EventLog& log);
csv::Table lane_change_table(const std::vector<LaneChangeRecord>& records,
                             const EventLog& log);
// Long form: t_bin, x_bin, mean_v, n; one row per non-empty cell.
csv::Table velocity_grid_table(const VelocityGrid& grid, const EventLog& log);

}  // namespace vanetflow::metrics
