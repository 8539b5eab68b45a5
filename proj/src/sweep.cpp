#include "sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "engine.hpp"

namespace vanetflow {

double SweepRow::time_to_gridlock() const {
  if (!summary) return std::nan("");
  return summary->gridlock_time.value_or(summary->end_time);
}

double SweepRow::time_to_origin_slow() const {
  if (!summary) return std::nan("");
  return summary->origin_congestion_time.value_or(summary->end_time);
}

double median(std::vector<double> values) {
  std::erase_if(values, [](double v) { return std::isnan(v); });
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

template <typename F>
double arm_median(const std::vector<SweepRow>& rows, bool communication, F value) {
  std::vector<double> xs;
  for (const auto& r : rows) {
    if (r.communication == communication && r.summary) xs.push_back(value(r));
  }
  return median(std::move(xs));
}

}  // namespace

double SweepResult::median_exits(bool communication) const {
  return arm_median(rows, communication,
                    [](const SweepRow& r) { return double(r.summary->exits); });
}

double SweepResult::median_time_to_gridlock(bool communication) const {
  return arm_median(rows, communication, [](const SweepRow& r) { return r.time_to_gridlock(); });
}

double SweepResult::median_time_to_origin_slow(bool communication) const {
  return arm_median(rows, communication,
                    [](const SweepRow& r) { return r.time_to_origin_slow(); });
}

csv::Table SweepResult::table(const SimConfig& cfg) const {
  csv::Table t;
  t.comments = csv::comment_lines(echo_config(cfg));
  t.columns = {"seed",        "arm",           "time_to_gridlock_s", "gridlocked",
               "time_to_origin_slow_s", "origin_slow", "total_exits",
               "total_arrivals", "error"};
  auto arm = [](bool c) { return std::string(c ? "comms" : "control"); };
  for (const auto& r : rows) {
    if (!r.summary) {
      t.rows.push_back({double(r.seed), arm(r.communication), std::string(), std::string(),
                        std::string(), std::string(), std::string(), std::string(), r.error});
      continue;
    }
    const auto& s = *r.summary;
    t.rows.push_back({double(r.seed), arm(r.communication), r.time_to_gridlock(),
                      s.gridlock_time ? 1.0 : 0.0, r.time_to_origin_slow(),
                      s.origin_congestion_time ? 1.0 : 0.0, double(s.exits),
                      double(s.arrivals), std::string()});
  }
  auto cell = [](double v) -> csv::Cell {
    if (std::isnan(v)) return std::string();
    return v;
  };
  for (bool c : {true, false}) {
    t.rows.push_back({std::string("median"), arm(c), cell(median_time_to_gridlock(c)),
                      std::string(), cell(median_time_to_origin_slow(c)), std::string(),
                      cell(median_exits(c)), std::string(), std::string()});
  }
  return t;
}

SweepResult run_sweep(const SimConfig& cfg, std::span<const std::uint64_t> seeds,
                      unsigned jobs) {
  SweepResult result;
  result.rows.resize(seeds.size() * 2);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    result.rows[2 * i].seed = seeds[i];
    result.rows[2 * i].communication = true;
    result.rows[2 * i + 1].seed = seeds[i];
    result.rows[2 * i + 1].communication = false;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < result.rows.size(); i = next++) {
      SweepRow& row = result.rows[i];
      SimConfig run_cfg = cfg;
      run_cfg.seed = row.seed;
      run_cfg.communication_enabled = row.communication;
      try {
        const EventLog log = run(run_cfg);
        row.summary = metrics::summarize(log, run_cfg);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };

  const unsigned n = std::max(1u, std::min<unsigned>(jobs, result.rows.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return result;
}

}  // namespace vanetflow
