#include "trial.hpp"

#include <cmath>
#include <stdexcept>

namespace usv::trial {

Calibration calibrate_approach_throttle(const dynamics::VesselParams& params,
                                        const dynamics::Environment& env) {
  if (!params.valid())
    throw std::invalid_argument("calibrate: invalid vessel parameters");
  const double u85 = dynamics::find_steady_speed(0.85, params, env);
  const double target = 0.9 * u85;

  double lo = params.deadband;       // speed 0
  double hi = 0.85;                  // speed u85 > target
  double throttle = 0.0, speed = 0.0;
  for (int iter = 0; iter < 60; ++iter) {
    throttle = (lo + hi) / 2.0;
    speed = dynamics::find_steady_speed(throttle, params, env);
    if (std::abs(speed - target) <= 0.005 * target)
      return {throttle, speed};
    (speed < target ? lo : hi) = throttle;
  }
  throw std::runtime_error("calibrate: bisection did not converge");
}

namespace {

log::EstimateSample estimate_sample(const ekf::EkfState& s) {
  log::EstimateSample e;
  for (int i = 0; i < ekf::kStateDim; ++i) {
    e.state[i] = s.x(i);
    e.p_diag[i] = s.P(i, i);
  }
  return e;
}

}  // namespace

TrialResult run_turning_circle(const config::Config& cfg, const Calibration& cal,
                               std::uint64_t seed) {
  cfg.validate();
  if (!(cal.throttle > 0.0 && cal.approach_speed > 0.0))
    throw std::invalid_argument("run_turning_circle: calibration missing");

  const auto& tc = cfg.trial;
  const double dt = tc.dt;
  const double turn_sign = tc.side == log::Side::kPort ? 1.0 : -1.0;
  const double heading_gain = 0.8;

  dynamics::Rng rng(seed);

  dynamics::SimState truth;
  truth.x = tc.start_x;
  truth.y = tc.start_y;
  truth.yaw = tc.start_yaw;

  ekf::EkfState est;
  est.x(ekf::kX) = tc.start_x;
  est.x(ekf::kY) = tc.start_y;
  est.x(ekf::kYaw) = tc.start_yaw;
  est.P = cfg.ekf.P0;

  sensors::ImuBiasState imu_bias;
  double next_gps_t = 0.0;
  double next_imu_t = 0.0;

  log::TrialLog out;
  out.metadata.vessel_length = cfg.vessel.length;
  out.metadata.side = tc.side;
  out.metadata.approach_speed = cal.approach_speed;
  out.metadata.seed = seed;
  out.metadata.config_snapshot = config::config_to_json(cfg);

  // Phase 1: settle to approach speed, then hold course for steady_hold.
  // Phase 2: constant steer until the heading has swept the full turn.
  bool executing = false;
  double settled_since = -1.0;
  double unwrapped = tc.start_yaw;
  double prev_yaw = tc.start_yaw;
  double exec_heading = 0.0;

  while (truth.t <= tc.max_duration + dt / 2) {
    if (!executing) {
      if (settled_since < 0.0 &&
          std::abs(truth.u - cal.approach_speed) < 0.02 * cal.approach_speed)
        settled_since = truth.t;
      if (settled_since >= 0.0 && truth.t - settled_since >= tc.steady_hold) {
        // first sample with the turn steer applied is the execute instant
        executing = true;
        out.metadata.execute_index = static_cast<long>(out.samples.size());
        exec_heading = unwrapped;
      }
    }

    double steer;
    if (!executing) {
      steer = std::clamp(heading_gain * geo::wrap_angle(tc.start_yaw - truth.yaw),
                         -1.0, 1.0);
    } else {
      steer = turn_sign * std::abs(tc.turn_steer);
    }
    const auto cmd = dynamics::mix_differential(cal.throttle, steer);

    log::LogRecord rec;
    rec.t = truth.t;
    rec.truth = log::TruthSample{truth.x, truth.y, truth.yaw, truth.u, truth.v, truth.r};
    rec.cmd = {cmd.left, cmd.right};

    if (truth.t >= next_gps_t - 1e-9) {
      next_gps_t += 1.0 / cfg.sensors.gps_rate;
      if (auto fix = sensors::sample_gps(truth, cfg.origin, cfg.sensors, rng)) {
        rec.gps = log::GpsSample{fix->point.lat, fix->point.lon, fix->point.alt,
                                 fix->horizontal_std};
        auto m = ekf::fuse_gps(*fix, cfg.origin);
        if (m.t > est.t) est = ekf::predict(est, m.t - est.t, cfg.ekf);
        est = ekf::correct(est, m, cfg.ekf);
      }
    }
    if (truth.t >= next_imu_t - 1e-9) {
      next_imu_t += 1.0 / cfg.sensors.imu_rate;
      const auto reading = sensors::sample_imu(truth, imu_bias, cfg.sensors, rng);
      rec.imu = log::ImuSample{reading.roll, reading.pitch, reading.yaw,
                               reading.rate_x, reading.rate_y, reading.rate_z};
      auto m = ekf::fuse_imu(reading);
      if (m.t > est.t) est = ekf::predict(est, m.t - est.t, cfg.ekf);
      est = ekf::correct(est, m, cfg.ekf);
    }
    rec.est = estimate_sample(est);
    out.samples.push_back(rec);

    if (executing && turn_sign * (unwrapped - exec_heading) >= tc.total_heading_change) {
      out.validate();
      return {std::move(out), true, ""};
    }

    truth = dynamics::step(truth, cmd, cfg.env, cfg.vessel, dt, rng);
    unwrapped += geo::wrap_angle(truth.yaw - prev_yaw);
    prev_yaw = truth.yaw;
  }

  out.validate();
  TrialResult res{std::move(out), false, ""};
  res.message = executing
                    ? "turn did not reach the configured heading change within max_duration"
                    : "approach speed never settled within max_duration";
  return res;
}

}  // namespace usv::trial
