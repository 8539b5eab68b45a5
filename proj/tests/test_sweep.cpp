#include <algorithm>
#include <cmath>
#include <vector>

#include "csv.hpp"
#include "doctest.h"
#include "presets.hpp"
#include "sweep.hpp"

using namespace vanetflow;

namespace {

SimConfig short_b() {
  SimConfig c = find_preset("velocity_motorway")->config;
  c.duration = 150.0;
  return c;
}

}  // namespace

TEST_CASE("median") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
  CHECK(std::isnan(median({})));
}

TEST_CASE("sweep output does not depend on the number of jobs") {
  const SimConfig cfg = short_b();
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  const auto one = run_sweep(cfg, seeds, 1);
  const auto four = run_sweep(cfg, seeds, 4);
  CHECK(csv::to_string(one.table(cfg)) == csv::to_string(four.table(cfg)));
  REQUIRE(one.rows.size() == 6);
  CHECK(one.rows[0].communication);
  CHECK_FALSE(one.rows[1].communication);
  for (const auto& r : one.rows) CHECK(r.summary);
}

TEST_CASE("arms agree when no warning can be received") {
  SimConfig cfg = short_b();
  cfg.radio.reception_prob = 0.0;
  const std::vector<std::uint64_t> seeds{5, 6};
  const auto r = run_sweep(cfg, seeds, 2);
  REQUIRE(r.rows.size() == 4);
  for (std::size_t i = 0; i < r.rows.size(); i += 2) {
    const auto& on = *r.rows[i].summary;
    const auto& off = *r.rows[i + 1].summary;
    CHECK(on.infected == 0);
    CHECK(on.exits == off.exits);
    CHECK(on.arrivals == off.arrivals);
    CHECK(on.lane_changes == off.lane_changes);
  }
}

TEST_CASE("median exits match an independent sort") {
  const SimConfig cfg = short_b();
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4};
  const auto r = run_sweep(cfg, seeds, 4);
  for (bool comm : {true, false}) {
    std::vector<double> xs;
    for (const auto& row : r.rows) {
      if (row.communication == comm) xs.push_back(double(row.summary->exits));
    }
    std::sort(xs.begin(), xs.end());
    CHECK(r.median_exits(comm) == 0.5 * (xs[1] + xs[2]));
  }
}

TEST_CASE("failed runs are reported per row") {
  SimConfig cfg = short_b();
  cfg.dt = -1.0;
  const std::vector<std::uint64_t> seeds{1, 2};
  const auto r = run_sweep(cfg, seeds, 2);
  REQUIRE(r.rows.size() == 4);
  for (const auto& row : r.rows) {
    CHECK_FALSE(row.summary);
    CHECK(row.error.find("dt") != std::string::npos);
  }
  const auto t = r.table(cfg);
  CHECK(t.rows.size() == 6);
}
