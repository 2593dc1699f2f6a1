#pragma once

#include "config.hpp"
#include "triallog.hpp"

namespace usv::trial {

struct Calibration {
  double throttle = 0.0;        // normalized
  double approach_speed = 0.0;  // m/s, = 0.9 * steady speed at 85% throttle
};

// Finds the throttle whose steady straight-line speed is 90% of the speed at
// 85% throttle, to within 0.5%. Throws std::runtime_error on non-convergence.
Calibration calibrate_approach_throttle(const dynamics::VesselParams& params,
                                        const dynamics::Environment& env);

struct TrialResult {
  log::TrialLog log;
  bool completed = false;  // reached the configured total heading change
  std::string message;
};

// Runs the full turning-circle protocol: accelerate, hold a steady course for
// at least cfg.trial.steady_hold seconds under a proportional heading hold,
// then apply a constant differential steer until the unwrapped heading has
// changed by cfg.trial.total_heading_change. Ground truth, sensor samples,
// online EKF estimates, and commands are logged every cfg.trial.dt.
TrialResult run_turning_circle(const config::Config& cfg, const Calibration& cal,
                               std::uint64_t seed);

}  // namespace usv::trial
