#include "vanetflow/vanetflow.h"

#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "engine.hpp"
#include "errors.hpp"
#include "metrics.hpp"
#include "outputs.hpp"
#include "presets.hpp"
#include "sweep.hpp"

struct vf_config {
  vanetflow::SimConfig cfg;
};

struct vf_result {
  vanetflow::SimConfig cfg;
  vanetflow::EventLog log;
  vanetflow::metrics::RunSummary summary;
};

struct vf_sweep {
  vanetflow::SimConfig cfg;
  vanetflow::SweepResult result;
};

namespace {

thread_local std::string g_last_error;

vf_status fail(vf_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Maps the exception in flight to a status code.
vf_status translate() {
  try {
    throw;
  } catch (const vanetflow::ConfigError& e) {
    return fail(VF_ERR_CONFIG, e.what());
  } catch (const vanetflow::IoError& e) {
    return fail(VF_ERR_IO, e.what());
  } catch (const vanetflow::SimulationError& e) {
    return fail(VF_ERR_SIMULATION, e.what());
  } catch (const vanetflow::DomainError& e) {
    return fail(VF_ERR_SIMULATION, e.what());
  } catch (const std::bad_alloc&) {
    return fail(VF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(VF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(VF_ERR_INTERNAL, "unknown error");
  }
}

template <typename F>
vf_status guarded(F&& body) {
  try {
    body();
    return VF_OK;
  } catch (...) {
    return translate();
  }
}

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw vanetflow::IoError(std::string("cannot read ") + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

vf_summary to_c(const vanetflow::metrics::RunSummary& s) {
  vf_summary out{};
  out.arrivals = s.arrivals;
  out.exits = s.exits;
  out.infected = s.infected;
  out.lane_changes = s.lane_changes;
  out.transmissions = s.transmissions;
  out.end_time = s.end_time;
  out.gridlocked = s.gridlock_time.has_value();
  out.gridlock_time = s.gridlock_time.value_or(0.0);
  out.origin_congested = s.origin_congestion_time.has_value();
  out.origin_congestion_time = s.origin_congestion_time.value_or(0.0);
  return out;
}

#define VF_REQUIRE(cond, what) \
  if (!(cond)) return fail(VF_ERR_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* vf_last_error(void) { return g_last_error.c_str(); }

const char* vf_status_name(vf_status status) {
  switch (status) {
    case VF_OK: return "ok";
    case VF_ERR_INVALID_ARGUMENT: return "invalid argument";
    case VF_ERR_CONFIG: return "configuration error";
    case VF_ERR_NOT_FOUND: return "not found";
    case VF_ERR_IO: return "i/o error";
    case VF_ERR_SIMULATION: return "simulation error";
    case VF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* vf_version(void) { return "0.1.0"; }

void vf_string_free(char* s) { delete[] s; }

vf_status vf_config_new(vf_config** out) {
  VF_REQUIRE(out, "vf_config_new: out is null");
  return guarded([&] { *out = new vf_config{}; });
}

vf_status vf_config_parse(const char* text, vf_config** out) {
  VF_REQUIRE(text && out, "vf_config_parse: null argument");
  return guarded([&] { *out = new vf_config{vanetflow::parse_config(text)}; });
}

vf_status vf_config_load(const char* path, vf_config** out) {
  VF_REQUIRE(path && out, "vf_config_load: null argument");
  return guarded([&] {
    const std::string text = read_file(path);
    try {
      *out = new vf_config{vanetflow::parse_config(text)};
    } catch (const vanetflow::ConfigError& e) {
      throw vanetflow::ConfigError(e.key(), std::string(path) + ": " + e.what());
    }
  });
}

vf_status vf_config_from_preset(const char* name, vf_config** out) {
  VF_REQUIRE(name && out, "vf_config_from_preset: null argument");
  const auto* preset = vanetflow::find_preset(name);
  if (!preset) return fail(VF_ERR_NOT_FOUND, std::string("unknown preset '") + name + "'");
  return guarded([&] { *out = new vf_config{preset->config}; });
}

vf_status vf_config_clone(const vf_config* cfg, vf_config** out) {
  VF_REQUIRE(cfg && out, "vf_config_clone: null argument");
  return guarded([&] { *out = new vf_config{cfg->cfg}; });
}

vf_status vf_config_apply(vf_config* cfg, const char* text) {
  VF_REQUIRE(cfg && text, "vf_config_apply: null argument");
  return guarded([&] { cfg->cfg = vanetflow::apply_config(cfg->cfg, text); });
}

vf_status vf_config_apply_file(vf_config* cfg, const char* path) {
  VF_REQUIRE(cfg && path, "vf_config_apply_file: null argument");
  return guarded([&] {
    const std::string text = read_file(path);
    try {
      cfg->cfg = vanetflow::apply_config(cfg->cfg, text);
    } catch (const vanetflow::ConfigError& e) {
      throw vanetflow::ConfigError(e.key(), std::string(path) + ": " + e.what());
    }
  });
}

vf_status vf_config_set(vf_config* cfg, const char* key, const char* value) {
  VF_REQUIRE(cfg && key && value, "vf_config_set: null argument");
  return guarded([&] {
    vanetflow::SimConfig next = cfg->cfg;
    vanetflow::set_config_value(next, key, value);
    cfg->cfg = next;
  });
}

vf_status vf_config_validate(const vf_config* cfg) {
  VF_REQUIRE(cfg, "vf_config_validate: null config");
  return guarded([&] { cfg->cfg.validate(); });
}

vf_status vf_config_echo(const vf_config* cfg, char** out) {
  VF_REQUIRE(cfg && out, "vf_config_echo: null argument");
  return guarded([&] { *out = copy_string(vanetflow::echo_config(cfg->cfg)); });
}

void vf_config_free(vf_config* cfg) { delete cfg; }

size_t vf_preset_count(void) { return vanetflow::presets().size(); }

vf_status vf_preset_info(size_t index, const char** name, const char** description) {
  const auto table = vanetflow::presets();
  if (index >= table.size()) {
    return fail(VF_ERR_NOT_FOUND, "preset index " + std::to_string(index) + " out of range");
  }
  // Preset strings are literals, so the views are null-terminated.
  if (name) *name = table[index].name.data();
  if (description) *description = table[index].description.data();
  return VF_OK;
}

vf_status vf_run(const vf_config* cfg, vf_result** out) {
  VF_REQUIRE(cfg && out, "vf_run: null argument");
  return guarded([&] {
    auto result = std::make_unique<vf_result>();
    result->cfg = cfg->cfg;
    result->log = vanetflow::run(cfg->cfg);
    result->summary = vanetflow::metrics::summarize(result->log, cfg->cfg);
    *out = result.release();
  });
}

vf_status vf_result_summary(const vf_result* result, vf_summary* out) {
  VF_REQUIRE(result && out, "vf_result_summary: null argument");
  *out = to_c(result->summary);
  return VF_OK;
}

vf_status vf_result_write(const vf_result* result, const char* out_dir) {
  VF_REQUIRE(result && out_dir, "vf_result_write: null argument");
  return guarded([&] { vanetflow::write_run_outputs(result->log, result->cfg, out_dir); });
}

void vf_result_free(vf_result* result) { delete result; }

vf_status vf_sweep_run(const vf_config* cfg, uint64_t first_seed, uint64_t last_seed,
                       unsigned jobs, vf_sweep** out) {
  VF_REQUIRE(cfg && out, "vf_sweep_run: null argument");
  if (last_seed < first_seed) {
    return fail(VF_ERR_CONFIG, "seed range " + std::to_string(first_seed) + ".." +
                                   std::to_string(last_seed) + " is empty");
  }
  return guarded([&] {
    cfg->cfg.validate();
    std::vector<std::uint64_t> seeds(last_seed - first_seed + 1);
    std::iota(seeds.begin(), seeds.end(), first_seed);
    auto sweep = std::make_unique<vf_sweep>();
    sweep->cfg = cfg->cfg;
    sweep->result = vanetflow::run_sweep(cfg->cfg, seeds, jobs == 0 ? 1 : jobs);
    *out = sweep.release();
  });
}

size_t vf_sweep_size(const vf_sweep* sweep) { return sweep ? sweep->result.rows.size() : 0; }

vf_status vf_sweep_row_at(const vf_sweep* sweep, size_t index, vf_sweep_row* out) {
  VF_REQUIRE(sweep && out, "vf_sweep_row_at: null argument");
  if (index >= sweep->result.rows.size()) {
    return fail(VF_ERR_NOT_FOUND, "sweep row " + std::to_string(index) + " out of range");
  }
  const auto& row = sweep->result.rows[index];
  *out = vf_sweep_row{};
  out->seed = row.seed;
  out->communication = row.communication;
  out->ok = row.summary.has_value();
  out->error = row.error.c_str();
  if (row.summary) out->summary = to_c(*row.summary);
  return VF_OK;
}

vf_status vf_sweep_median_exits(const vf_sweep* sweep, int communication, double* out) {
  VF_REQUIRE(sweep && out, "vf_sweep_median_exits: null argument");
  *out = sweep->result.median_exits(communication != 0);
  return VF_OK;
}

vf_status vf_sweep_write(const vf_sweep* sweep, const char* out_dir) {
  VF_REQUIRE(sweep && out_dir, "vf_sweep_write: null argument");
  return guarded([&] {
    vanetflow::ensure_directory(out_dir);
    vanetflow::csv::write_csv(sweep->result.table(sweep->cfg),
                              std::filesystem::path(out_dir) / "sweep_summary.csv");
  });
}

void vf_sweep_free(vf_sweep* sweep) { delete sweep; }

}  // extern "C"
