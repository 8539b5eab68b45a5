#pragma once

#include <filesystem>

#include "config.hpp"
#include "event_log.hpp"

namespace vanetflow {

// Writes events.csv, exits.csv, lane_changes.csv and velocity_grid.csv into
// `dir`, creating it if needed. Throws IoError.
void write_run_outputs(const EventLog& log, const SimConfig& cfg,
                       const std::filesystem::path& dir);

void ensure_directory(const std::filesystem::path& dir);

}  // namespace vanetflow
