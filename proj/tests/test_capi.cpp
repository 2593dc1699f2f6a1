#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "analytic_log.hpp"
#include "core/logio.hpp"
#include "usvsim.h"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  return {std::istreambuf_iterator<char>(f), {}};
}

struct ConfigGuard {
  usv_config* cfg;
  explicit ConfigGuard(usv_config* c) : cfg(c) {}
  ~ConfigGuard() { usv_config_free(cfg); }
};

}  // namespace

TEST_CASE("config default, override, side, to_json") {
  usv_config* cfg = usv_config_default();
  REQUIRE(cfg != nullptr);
  ConfigGuard guard(cfg);

  char* json = nullptr;
  REQUIRE(usv_config_to_json(cfg, &json) == USV_OK);
  std::string before(json);
  usv_string_free(json);
  CHECK(before.find("\"length\": 0.72") != std::string::npos);

  CHECK(usv_config_override(cfg, R"({"vessel": {"mass": 6.5}})") == USV_OK);
  json = nullptr;
  REQUIRE(usv_config_to_json(cfg, &json) == USV_OK);
  std::string after(json);
  usv_string_free(json);
  CHECK(after.find("\"mass\": 6.5") != std::string::npos);

  CHECK(usv_config_set_side(cfg, "starboard") == USV_OK);
  CHECK(usv_config_set_side(cfg, "sideways") == USV_ERR_VALIDATION);
  CHECK(std::string(usv_last_error()).size() > 0);
}

TEST_CASE("config error codes") {
  CHECK(usv_config_load("no_such_config.json") == nullptr);
  CHECK(std::string(usv_last_error()).find("no_such_config.json") !=
        std::string::npos);

  usv_config* cfg = usv_config_default();
  ConfigGuard guard(cfg);
  CHECK(usv_config_override(cfg, "{not json") == USV_ERR_VALIDATION);
  CHECK(usv_config_override(cfg, R"({"vessel": {"masss": 1}})") ==
        USV_ERR_VALIDATION);
  CHECK(usv_config_override(nullptr, "{}") == USV_ERR_VALIDATION);

  // rejected overrides leave the config usable
  char* json = nullptr;
  CHECK(usv_config_to_json(cfg, &json) == USV_OK);
  usv_string_free(json);
}

TEST_CASE("calibrate returns the 90%-of-U85 operating point") {
  usv_config* cfg = usv_config_default();
  ConfigGuard guard(cfg);
  double throttle = 0.0, speed = 0.0;
  REQUIRE(usv_calibrate(cfg, &throttle, &speed) == USV_OK);
  CHECK(throttle > 0.0);
  CHECK(throttle < 0.85);
  CHECK(speed > 0.0);
  CHECK(usv_calibrate(cfg, nullptr, &speed) == USV_ERR_VALIDATION);
}

TEST_CASE("run_trial writes all artifacts and is byte-deterministic") {
  usv_config* cfg = usv_config_default();
  ConfigGuard guard(cfg);
  REQUIRE(usv_config_override(cfg, R"({"trial": {"max_duration": 400}})") ==
          USV_OK);

  const fs::path d1 = "capi_trial_a", d2 = "capi_trial_b";
  REQUIRE(usv_run_trial(cfg, 11, d1.string().c_str()) == USV_OK);
  REQUIRE(usv_run_trial(cfg, 11, d2.string().c_str()) == USV_OK);

  for (const char* name : {"trial.jsonl", "metrics.csv", "compliance.txt",
                           "resolved_config.json", "trajectory.svg",
                           "heading.svg", "speed.svg"}) {
    CAPTURE(name);
    CHECK(slurp(d1 / name) == slurp(d2 / name));
  }
  auto log = usv::logio::read_log((d1 / "trial.jsonl").string());
  CHECK(log.metadata.execute_index > 0);
  CHECK(log.samples.size() > 1000);
  CHECK(slurp(d1 / "compliance.txt").find("Advance") != std::string::npos);

  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("run_trial protocol failure still writes the partial log") {
  usv_config* cfg = usv_config_default();
  ConfigGuard guard(cfg);
  // a heading sweep no trial can cover inside max_duration
  REQUIRE(usv_config_override(
              cfg, R"({"trial": {"max_duration": 80,
                                 "total_heading_change_deg": 20000}})") ==
          USV_OK);
  const fs::path dir = "capi_trial_fail";
  CHECK(usv_run_trial(cfg, 1, dir.string().c_str()) == USV_ERR_PROTOCOL);
  CHECK(std::string(usv_last_error()).find("incomplete") != std::string::npos);
  CHECK(fs::exists(dir / "trial.jsonl"));
  auto log = usv::logio::read_log((dir / "trial.jsonl").string());
  CHECK(!log.samples.empty());
  fs::remove_all(dir);
}

TEST_CASE("ekf_replay fills estimates and refuses sensorless logs") {
  usv_config* cfg = usv_config_default();
  ConfigGuard guard(cfg);
  REQUIRE(usv_config_override(cfg, R"({"trial": {"max_duration": 400}})") ==
          USV_OK);
  const fs::path dir = "capi_replay";
  REQUIRE(usv_run_trial(cfg, 21, dir.string().c_str()) == USV_OK);
  const auto in = (dir / "trial.jsonl").string();
  const auto out = (dir / "replayed.jsonl").string();

  int applied = 0, dropped = 0;
  REQUIRE(usv_ekf_replay(cfg, in.c_str(), out.c_str(), &applied, &dropped) ==
          USV_OK);
  CHECK(applied > 0);
  CHECK(dropped == 0);
  auto replayed = usv::logio::read_log(out);
  REQUIRE(!replayed.samples.empty());
  for (const auto& s : replayed.samples) CHECK(s.est.has_value());

  // a log without sensor fields is rejected as invalid input
  auto bare = usv::logio::read_log(in);
  for (auto& s : bare.samples) {
    s.gps.reset();
    s.imu.reset();
  }
  const auto bare_path = (dir / "bare.jsonl").string();
  usv::logio::write_log(bare, bare_path);
  CHECK(usv_ekf_replay(cfg, bare_path.c_str(), out.c_str(), nullptr, nullptr) ==
        USV_ERR_VALIDATION);
  CHECK(usv_ekf_replay(cfg, "missing.jsonl", out.c_str(), nullptr, nullptr) ==
        USV_ERR_IO);
  fs::remove_all(dir);
}

TEST_CASE("metrics_json on the analytic circle") {
  auto log = fixture::analytic_circle_log(fixture::CircleSpec{});
  const char* path = "capi_metrics.jsonl";
  usv::logio::write_log(log, path);

  char* json = nullptr;
  REQUIRE(usv_metrics_json(path, "truth", 0.72, &json) == USV_OK);
  std::string body(json);
  usv_string_free(json);
  auto j = nlohmann::json::parse(body);
  CHECK(j.at("metrics").at("advance_m").get<double>() ==
        doctest::Approx(2.0).epsilon(0.01));
  CHECK(j.at("metrics").at("tactical_diameter_m").get<double>() ==
        doctest::Approx(4.0).epsilon(0.01));
  CHECK(j.at("compliance").at("advance_limit_m").get<double>() ==
        doctest::Approx(3.24));
  CHECK(j.at("compliance").at("advance_pass").get<bool>());
  CHECK(j.at("table").get<std::string>().find("Advance") != std::string::npos);

  CHECK(usv_metrics_json(path, "sideways", 0.72, &json) == USV_ERR_VALIDATION);
  CHECK(usv_metrics_json("missing.jsonl", "truth", 0.72, &json) == USV_ERR_IO);
  std::remove(path);
}

TEST_CASE("check_imo matches published measurements") {
  struct Case {
    double td, advance;
    int expect_td, expect_advance;
  };
  // strict < against limits 5L and 4.5L with L = 0.72 (3.6 m / 3.24 m)
  const Case cases[] = {
      {7.07, 8.42, 0, 0}, {7.2, 9.08, 0, 0}, {6.8, 5.74, 0, 0},
      {3.59, 3.23, 1, 1}, {3.6, 3.24, 0, 0},
  };
  for (const auto& c : cases) {
    CAPTURE(c.td);
    int ap = -1, tp = -1;
    double alim = 0.0, tlim = 0.0;
    REQUIRE(usv_check_imo(c.advance, c.td, 0.72, &ap, &tp, &alim, &tlim) ==
            USV_OK);
    CHECK(ap == c.expect_advance);
    CHECK(tp == c.expect_td);
    CHECK(alim == doctest::Approx(3.24));
    CHECK(tlim == doctest::Approx(3.6));
  }
  CHECK(usv_check_imo(1.0, 1.0, 0.0, nullptr, nullptr, nullptr, nullptr) ==
        USV_ERR_VALIDATION);
}

TEST_CASE("report aggregates several logs and writes CSV") {
  fixture::CircleSpec port;
  fixture::CircleSpec stbd = port;
  stbd.side = usv::log::Side::kStarboard;
  const char* p1 = "capi_report_p.jsonl";
  const char* p2 = "capi_report_s.jsonl";
  usv::logio::write_log(fixture::analytic_circle_log(port), p1);
  usv::logio::write_log(fixture::analytic_circle_log(stbd), p2);

  const char* paths[] = {p1, p2};
  const char* csv_path = "capi_report.csv";
  char* table = nullptr;
  REQUIRE(usv_report(paths, 2, "truth", csv_path, &table) == USV_OK);
  std::string t(table);
  usv_string_free(table);
  CHECK(t.find("(P)") != std::string::npos);
  CHECK(t.find("(S)") != std::string::npos);
  CHECK(slurp(csv_path).find("advance") != std::string::npos);

  CHECK(usv_report(nullptr, 0, "truth", nullptr, nullptr) ==
        USV_ERR_VALIDATION);
  std::remove(p1);
  std::remove(p2);
  std::remove(csv_path);
}

TEST_CASE("ingest_external converts a declared-convention CSV track") {
  const char* csv = "capi_ingest.csv";
  {
    std::ofstream f(csv);
    f << "iso_time,lat,lon,heading_deg_compass,speed_mps\n";
    f << "2024-05-01T12:00:00Z,53.0,-1.6,90.0,0.8\n";
    f << "2024-05-01T12:00:01Z,53.0,-1.59999,90.0,0.8\n";
  }
  const char* out = "capi_ingest.jsonl";
  REQUIRE(usv_ingest_external(csv, 53.0, -1.6, 0.0, "WGS84", "compass-deg", -1,
                              out) == USV_OK);
  auto log = usv::logio::read_log(out);
  REQUIRE(log.samples.size() == 2);
  CHECK(log.samples[0].truth->yaw == doctest::Approx(0.0));  // east
  CHECK(log.samples[1].truth->x > 0.0);

  CHECK(usv_ingest_external(csv, 53.0, -1.6, 0.0, "OSGB36", "compass-deg", -1,
                            out) == USV_ERR_VALIDATION);
  CHECK(usv_ingest_external("missing.csv", 53.0, -1.6, 0.0, "WGS84",
                            "compass-deg", -1, out) == USV_ERR_IO);
  std::remove(csv);
  std::remove(out);
}
