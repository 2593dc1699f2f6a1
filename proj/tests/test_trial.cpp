#include <doctest.h>

#include <cmath>

#include "core/geo.hpp"
#include "core/metrics.hpp"
#include "core/trial.hpp"

using namespace usv::trial;
using usv::config::Config;

TEST_CASE("calibration hits 90% of the 85%-throttle speed") {
  Config cfg;
  auto cal = calibrate_approach_throttle(cfg.vessel, cfg.env);
  const double u85 = usv::dynamics::find_steady_speed(0.85, cfg.vessel, cfg.env);
  CHECK(cal.approach_speed / u85 == doctest::Approx(0.90).epsilon(0.005));
  CHECK(cal.throttle > cfg.vessel.deadband);
  CHECK(cal.throttle < 0.85);
}

TEST_CASE("calibration on a linear-drag config matches the closed form") {
  // Linear drag dominant: steady speed is proportional to thrust, so the
  // calibrated throttle solves ((th-db)/(1-db))^2 = 0.9 ((0.85-db)/(1-db))^2.
  Config cfg;
  cfg.vessel.drag_surge_quad = 1e-9;
  cfg.vessel.drag_surge_lin = 8.0;
  auto cal = calibrate_approach_throttle(cfg.vessel, cfg.env);
  const double db = cfg.vessel.deadband;
  const double expected = db + std::sqrt(0.9) * (0.85 - db);
  CHECK(cal.throttle == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("starboard trial turns clockwise and reaches 540 degrees") {
  Config cfg;
  cfg.trial.max_duration = 400.0;
  auto cal = calibrate_approach_throttle(cfg.vessel, cfg.env);
  auto res = run_turning_circle(cfg, cal, 1);
  REQUIRE(res.completed);
  const auto& log = res.log;
  REQUIRE(log.metadata.execute_index > 0);

  // at least one minute of steady approach before execute
  const double t_exec = log.samples[log.metadata.execute_index].t;
  double steady_start = t_exec;
  for (long i = log.metadata.execute_index; i >= 0; --i) {
    const auto& s = log.samples[i];
    if (std::abs(std::hypot(s.truth->u, s.truth->v) - cal.approach_speed) >
        0.05 * cal.approach_speed)
      break;
    steady_start = s.t;
  }
  CHECK(t_exec - steady_start >= 60.0);

  // phase 2: constant commanded steer, heading monotonically decreasing
  std::vector<double> yaws;
  for (size_t i = log.metadata.execute_index; i < log.samples.size(); ++i)
    yaws.push_back(log.samples[i].truth->yaw);
  auto unwrapped = usv::geo::unwrap_heading(yaws);
  CHECK(unwrapped.front() - unwrapped.back() >= 3.0 * M_PI);
  int decreasing = 0;
  for (size_t i = 1; i < unwrapped.size(); ++i)
    if (unwrapped[i] <= unwrapped[i - 1] + 1e-12) ++decreasing;
  CHECK(decreasing > static_cast<int>(unwrapped.size() * 0.95));

  const double steer0 =
      log.samples[log.metadata.execute_index].cmd.right -
      log.samples[log.metadata.execute_index].cmd.left;
  for (size_t i = log.metadata.execute_index; i < log.samples.size(); ++i) {
    const double steer = log.samples[i].cmd.right - log.samples[i].cmd.left;
    CHECK(steer == doctest::Approx(steer0));
  }
}

TEST_CASE("port and starboard trials mirror under zero disturbance") {
  Config cfg;
  cfg.trial.max_duration = 400.0;
  auto cal = calibrate_approach_throttle(cfg.vessel, cfg.env);

  Config port = cfg;
  port.trial.side = usv::log::Side::kPort;
  Config stbd = cfg;
  stbd.trial.side = usv::log::Side::kStarboard;

  auto rp = run_turning_circle(port, cal, 3);
  auto rs = run_turning_circle(stbd, cal, 3);
  REQUIRE(rp.completed);
  REQUIRE(rs.completed);

  auto mp = usv::metrics::compute_metrics(rp.log, usv::metrics::Source::kTruth);
  auto ms = usv::metrics::compute_metrics(rs.log, usv::metrics::Source::kTruth);
  CHECK(mp.advance == doctest::Approx(ms.advance).epsilon(0.01));
  CHECK(mp.transfer == doctest::Approx(ms.transfer).epsilon(0.01));
  CHECK(mp.tactical_diameter == doctest::Approx(ms.tactical_diameter).epsilon(0.01));
  CHECK(mp.t90 == doctest::Approx(ms.t90).epsilon(0.01));
}

TEST_CASE("trial failure reports a partial log") {
  Config cfg;
  cfg.trial.max_duration = 80.0;
  cfg.trial.total_heading_change = 400.0;  // unreachable sweep inside 80 s
  auto cal = calibrate_approach_throttle(cfg.vessel, cfg.env);
  auto res = run_turning_circle(cfg, cal, 1);
  CHECK_FALSE(res.completed);
  CHECK(!res.message.empty());
  CHECK(!res.log.samples.empty());
}

TEST_CASE("missing calibration rejected") {
  Config cfg;
  CHECK_THROWS_AS(run_turning_circle(cfg, Calibration{}, 0), std::invalid_argument);
}
