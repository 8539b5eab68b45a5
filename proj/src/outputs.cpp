#include "outputs.hpp"

#include <fstream>
#include <system_error>

#include "errors.hpp"
#include "metrics.hpp"

namespace vanetflow {

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() +
                  (ec ? ": " + ec.message() : std::string()));
  }
}

void write_run_outputs(const EventLog& log, const SimConfig& cfg,
                       const std::filesystem::path& dir) {
  ensure_directory(dir);

  const auto events_path = dir / "events.csv";
  {
    std::ofstream out(events_path, std::ios::binary);
    if (!out) throw IoError("cannot open " + events_path.string() + " for writing");
    write_events_csv(log, out);
    out.flush();
    if (!out) throw IoError("write failed: " + events_path.string());
  }

  csv::write_csv(metrics::exit_table(metrics::exit_series(log), log), dir / "exits.csv");
  csv::write_csv(metrics::lane_change_table(metrics::lane_change_positions(log), log),
                 dir / "lane_changes.csv");
  csv::write_csv(metrics::velocity_grid_table(metrics::velocity_grid(log, cfg), log),
                 dir / "velocity_grid.csv");
}

}  // namespace vanetflow
