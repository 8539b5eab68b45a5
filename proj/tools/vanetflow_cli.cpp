// vanetflow command line: single runs, paired seed sweeps, preset listing.
// Talks to the simulator only through the C API.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vanetflow/vanetflow.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct ApiError {
  vf_status status;
  std::string message;
};

void check(vf_status st) {
  if (st != VF_OK) throw ApiError{st, vf_last_error()};
}

struct ConfigDeleter {
  void operator()(vf_config* c) const { vf_config_free(c); }
};
struct ResultDeleter {
  void operator()(vf_result* r) const { vf_result_free(r); }
};
struct SweepDeleter {
  void operator()(vf_sweep* s) const { vf_sweep_free(s); }
};
using ConfigPtr = std::unique_ptr<vf_config, ConfigDeleter>;

struct CommonOptions {
  std::string config_path;
  std::string preset;
  std::string policy;
  std::vector<std::string> overrides;  // key=value
  bool stop_at_origin = false;
  std::string out_dir = "vanetflow_out";
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "key = value config file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--preset", o.preset, "start from a named preset (see `presets`)");
  cmd->add_option("--policy", o.policy, "rebroadcast policy")
      ->check(CLI::IsMember({"flooding", "edge", "distance", "mixed"}));
  cmd->add_option("--set", o.overrides, "extra KEY=VALUE override, repeatable");
  cmd->add_flag("--stop-at-origin", o.stop_at_origin,
                "stop once congestion reaches the field origin");
  cmd->add_option("--out-dir", o.out_dir, "directory for the CSV outputs");
}

// Preset, then config file, then flags.
ConfigPtr build_config(const CommonOptions& o) {
  vf_config* raw = nullptr;
  if (!o.preset.empty()) {
    check(vf_config_from_preset(o.preset.c_str(), &raw));
  } else {
    check(vf_config_new(&raw));
  }
  ConfigPtr cfg(raw);
  if (!o.config_path.empty()) check(vf_config_apply_file(cfg.get(), o.config_path.c_str()));
  if (!o.policy.empty()) check(vf_config_set(cfg.get(), "policy", o.policy.c_str()));
  if (o.stop_at_origin) check(vf_config_set(cfg.get(), "stop_at_origin", "true"));
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ApiError{VF_ERR_CONFIG, "--set expects KEY=VALUE, got '" + kv + "'"};
    }
    check(vf_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
  }
  return cfg;
}

std::string format_time(int present, double t) {
  if (!present) return "never";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", t);
  return buf;
}

void print_summary(const vf_summary& s) {
  std::printf("arrivals          %llu\n", static_cast<unsigned long long>(s.arrivals));
  std::printf("exits             %llu\n", static_cast<unsigned long long>(s.exits));
  std::printf("infected          %llu\n", static_cast<unsigned long long>(s.infected));
  std::printf("lane changes      %llu\n", static_cast<unsigned long long>(s.lane_changes));
  std::printf("transmissions     %llu\n", static_cast<unsigned long long>(s.transmissions));
  std::printf("end time          %.2f s\n", s.end_time);
  std::printf("gridlock          %s\n", format_time(s.gridlocked, s.gridlock_time).c_str());
  std::printf("origin congested  %s\n",
              format_time(s.origin_congested, s.origin_congestion_time).c_str());
}

struct SeedRange {
  std::uint64_t first = 1;
  std::uint64_t last = 10;
};

SeedRange parse_seed_range(const std::string& text) {
  auto number = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw CLI::ValidationError("--seeds", "expected N..M, got '" + text + "'");
    }
    return static_cast<std::uint64_t>(std::stoull(s));
  };
  const auto dots = text.find("..");
  SeedRange r;
  if (dots == std::string::npos) {
    r.first = r.last = number(text);
  } else {
    r.first = number(text.substr(0, dots));
    r.last = number(text.substr(dots + 2));
  }
  if (r.last < r.first) throw CLI::ValidationError("--seeds", "empty range '" + text + "'");
  return r;
}

int cmd_run(const CommonOptions& o, std::optional<std::uint64_t> seed, bool no_comms) {
  ConfigPtr cfg = build_config(o);
  if (seed) check(vf_config_set(cfg.get(), "seed", std::to_string(*seed).c_str()));
  if (no_comms) check(vf_config_set(cfg.get(), "communication_enabled", "false"));

  vf_result* raw = nullptr;
  check(vf_run(cfg.get(), &raw));
  std::unique_ptr<vf_result, ResultDeleter> result(raw);
  check(vf_result_write(result.get(), o.out_dir.c_str()));

  vf_summary s{};
  check(vf_result_summary(result.get(), &s));
  print_summary(s);
  std::printf("outputs           %s\n", o.out_dir.c_str());
  return 0;
}

int cmd_sweep(const CommonOptions& o, const SeedRange& seeds, unsigned jobs) {
  ConfigPtr cfg = build_config(o);
  vf_sweep* raw = nullptr;
  check(vf_sweep_run(cfg.get(), seeds.first, seeds.last, jobs, &raw));
  std::unique_ptr<vf_sweep, SweepDeleter> sweep(raw);
  check(vf_sweep_write(sweep.get(), o.out_dir.c_str()));

  std::size_t failed = 0;
  for (std::size_t i = 0; i < vf_sweep_size(sweep.get()); ++i) {
    vf_sweep_row row{};
    check(vf_sweep_row_at(sweep.get(), i, &row));
    if (row.ok) continue;
    ++failed;
    std::fprintf(stderr, "seed %llu (%s) failed: %s\n",
                 static_cast<unsigned long long>(row.seed),
                 row.communication ? "comms" : "control", row.error);
  }
  double on = 0.0;
  double off = 0.0;
  check(vf_sweep_median_exits(sweep.get(), 1, &on));
  check(vf_sweep_median_exits(sweep.get(), 0, &off));
  std::printf("seeds             %llu..%llu\n", static_cast<unsigned long long>(seeds.first),
              static_cast<unsigned long long>(seeds.last));
  std::printf("median exits      comms %.1f, control %.1f\n", on, off);
  std::printf("outputs           %s/sweep_summary.csv\n", o.out_dir.c_str());
  return failed == 0 ? 0 : kExitRuntime;
}

int cmd_presets() {
  for (std::size_t i = 0; i < vf_preset_count(); ++i) {
    const char* name = nullptr;
    const char* description = nullptr;
    check(vf_preset_info(i, &name, &description));
    std::printf("%-22s %s\n", name, description);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vanetflow: obstacle scenario with vehicle-to-vehicle warnings"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  std::uint64_t seed = 0;
  bool no_comms = false;
  auto* run = app.add_subcommand("run", "simulate one seed and write the CSV outputs");
  add_common(run, run_opts);
  auto* seed_opt = run->add_option("--seed", seed, "random seed");
  run->add_flag("--no-comms", no_comms, "control run without communication");

  CommonOptions sweep_opts;
  std::string seeds_text = "1..10";
  unsigned jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "paired comms/control runs over a seed range");
  add_common(sweep, sweep_opts);
  sweep->add_option("--seeds", seeds_text, "seed range N..M (inclusive)");
  sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 1024u));

  auto* presets = app.add_subcommand("presets", "list the scenario presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) {
      std::optional<std::uint64_t> s;
      if (*seed_opt) s = seed;
      return cmd_run(run_opts, s, no_comms);
    }
    if (*sweep) return cmd_sweep(sweep_opts, parse_seed_range(seeds_text), jobs);
    if (*presets) return cmd_presets();
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const ApiError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.status == VF_ERR_CONFIG || e.status == VF_ERR_NOT_FOUND ? kExitUsage
                                                                      : kExitRuntime;
  }
  return kExitUsage;
}
