#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "csv.hpp"
#include "metrics.hpp"

namespace vanetflow {

struct SweepRow {
  std::uint64_t seed = 0;
  bool communication = true;
  std::optional<metrics::RunSummary> summary;  // empty when the run failed
  std::string error;

  // Censored at the end of the run when the event never happened.
  double time_to_gridlock() const;
  double time_to_origin_slow() const;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // seed order, communication arm first

  // Medians over the successful runs of one arm.
  double median_exits(bool communication) const;
  double median_time_to_gridlock(bool communication) const;
  double median_time_to_origin_slow(bool communication) const;

  csv::Table table(const SimConfig& cfg) const;
};

double median(std::vector<double> values);

// Runs `cfg` with communication on and off for every seed on up to `jobs`
// threads. Output depends only on the seeds, never on `jobs`. A failing run
// is reported in its row and does not stop the sweep.
SweepResult run_sweep(const SimConfig& cfg, std::span<const std::uint64_t> seeds,
                      unsigned jobs);

}  // namespace vanetflow
