#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "vanetflow/vanetflow.h"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

vf_config* short_preset(const char* name, double duration) {
  vf_config* cfg = nullptr;
  REQUIRE(vf_config_from_preset(name, &cfg) == VF_OK);
  REQUIRE(vf_config_set(cfg, "duration", std::to_string(duration).c_str()) == VF_OK);
  return cfg;
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(vf_status_name(VF_OK)) == "ok");
  CHECK(std::string(vf_status_name(VF_ERR_CONFIG)) == "configuration error");
  CHECK(std::string(vf_version()).size() > 0);
}

TEST_CASE("config handles") {
  vf_config* cfg = nullptr;
  REQUIRE(vf_config_new(&cfg) == VF_OK);
  CHECK(vf_config_set(cfg, "speed_limit", "90 km/h") == VF_OK);
  CHECK(vf_config_set(cfg, "bogus", "1") == VF_ERR_CONFIG);
  CHECK(std::string(vf_last_error()).find("bogus") != std::string::npos);
  // Setting does not validate; validation and runs do.
  CHECK(vf_config_set(cfg, "traffic_load", "-1") == VF_OK);
  CHECK(vf_config_validate(cfg) == VF_ERR_CONFIG);
  CHECK(std::string(vf_last_error()).find("traffic_load") != std::string::npos);
  CHECK(vf_config_set(cfg, "traffic_load", "4400") == VF_OK);
  CHECK(vf_config_validate(cfg) == VF_OK);

  char* echo = nullptr;
  REQUIRE(vf_config_echo(cfg, &echo) == VF_OK);
  CHECK(std::string(echo).find("speed_limit = 25") != std::string::npos);
  CHECK(std::string(echo).find("traffic_load = 4400") != std::string::npos);

  vf_config* copy = nullptr;
  REQUIRE(vf_config_parse(echo, &copy) == VF_OK);
  char* echo2 = nullptr;
  REQUIRE(vf_config_echo(copy, &echo2) == VF_OK);
  CHECK(std::string(echo) == std::string(echo2));
  vf_string_free(echo);
  vf_string_free(echo2);

  CHECK(vf_config_apply(copy, "seed = 5\nnope = 2\n") == VF_ERR_CONFIG);
  CHECK(vf_config_load("/nonexistent/cfg.txt", &copy) == VF_ERR_IO);
  CHECK(vf_config_from_preset("missing", &copy) == VF_ERR_NOT_FOUND);
  CHECK(vf_config_new(nullptr) == VF_ERR_INVALID_ARGUMENT);
  CHECK(vf_config_set(nullptr, "seed", "1") == VF_ERR_INVALID_ARGUMENT);
  vf_config_free(copy);
  vf_config_free(cfg);
  vf_config_free(nullptr);
}

TEST_CASE("presets are listed") {
  REQUIRE(vf_preset_count() == 5);
  const char* name = nullptr;
  const char* desc = nullptr;
  for (size_t i = 0; i < vf_preset_count(); ++i) {
    REQUIRE(vf_preset_info(i, &name, &desc) == VF_OK);
    vf_config* cfg = nullptr;
    CHECK(vf_config_from_preset(name, &cfg) == VF_OK);
    vf_config_free(cfg);
  }
  CHECK(vf_preset_info(5, &name, &desc) == VF_ERR_NOT_FOUND);
}

TEST_CASE("run and write outputs") {
  vf_config* cfg = short_preset("velocity_motorway", 120.0);
  vf_result* res = nullptr;
  REQUIRE(vf_run(cfg, &res) == VF_OK);
  vf_summary s{};
  REQUIRE(vf_result_summary(res, &s) == VF_OK);
  CHECK(s.arrivals > 0);
  CHECK(s.end_time == doctest::Approx(120.0));

  const fs::path dir = fs::temp_directory_path() / "vanetflow_capi_test";
  fs::remove_all(dir);
  REQUIRE(vf_result_write(res, dir.c_str()) == VF_OK);
  for (auto f : {"events.csv", "exits.csv", "lane_changes.csv", "velocity_grid.csv"}) {
    const std::string text = slurp(dir / f);
    CHECK(text.rfind("# ", 0) == 0);
  }
  CHECK(vf_result_write(res, "/proc/vanetflow/forbidden") == VF_ERR_IO);
  vf_result_free(res);
  fs::remove_all(dir);

  REQUIRE(vf_config_set(cfg, "dt", "0") == VF_OK);
  CHECK(vf_run(cfg, &res) == VF_ERR_CONFIG);
  vf_config_free(cfg);
}

TEST_CASE("sweep") {
  vf_config* cfg = short_preset("velocity_motorway", 100.0);
  vf_sweep* sw = nullptr;
  REQUIRE(vf_sweep_run(cfg, 1, 3, 3, &sw) == VF_OK);
  REQUIRE(vf_sweep_size(sw) == 6);
  vf_sweep_row row{};
  REQUIRE(vf_sweep_row_at(sw, 1, &row) == VF_OK);
  CHECK(row.seed == 1);
  CHECK(row.communication == 0);
  CHECK(row.ok == 1);
  CHECK(vf_sweep_row_at(sw, 6, &row) == VF_ERR_NOT_FOUND);
  double m = 0.0;
  CHECK(vf_sweep_median_exits(sw, 1, &m) == VF_OK);

  const fs::path dir = fs::temp_directory_path() / "vanetflow_capi_sweep";
  fs::remove_all(dir);
  REQUIRE(vf_sweep_write(sw, dir.c_str()) == VF_OK);
  CHECK(slurp(dir / "sweep_summary.csv").find("seed,arm") != std::string::npos);
  fs::remove_all(dir);
  vf_sweep_free(sw);

  CHECK(vf_sweep_run(cfg, 5, 2, 1, &sw) == VF_ERR_CONFIG);
  vf_config_free(cfg);
}
