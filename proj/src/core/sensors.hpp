#pragma once

#include <optional>

#include "dynamics.hpp"
#include "geo.hpp"

namespace usv::sensors {

struct GpsFix {
  double t = 0.0;
  geo::GeoPoint point;
  double horizontal_std = 1.5;  // m
  bool valid = true;
};

struct ImuReading {
  double t = 0.0;
  double roll = 0.0, pitch = 0.0, yaw = 0.0;     // rad, wrapped
  double rate_x = 0.0, rate_y = 0.0, rate_z = 0.0;  // rad/s
  double orientation_std = 0.035;  // rad
  double rate_std = 0.01;          // rad/s
};

struct SensorNoiseConfig {
  double gps_rate = 1.0;          // Hz
  double gps_std = 1.5;           // m ("low-cost" preset; RTK: 0.02)
  double gps_dropout_prob = 0.0;  // per-sample
  double imu_rate = 50.0;         // Hz
  double imu_yaw_std = 0.035;     // rad
  double imu_rate_std = 0.01;     // rad/s
  double gyro_bias_walk_std = 0.0;  // rad/s per sqrt(s)

  bool valid() const {
    return gps_rate > 0 && imu_rate > 0 && gps_std >= 0 && imu_yaw_std >= 0 &&
           imu_rate_std >= 0 && gyro_bias_walk_std >= 0 &&
           gps_dropout_prob >= 0 && gps_dropout_prob < 1;
  }
};

// Yaw-rate gyro bias, evolved as a random walk between IMU samples.
struct ImuBiasState {
  double gyro_bias_z = 0.0;
  double last_t = 0.0;
};

// Absent with probability cfg.gps_dropout_prob; otherwise truth position plus
// per-axis Gaussian noise, expressed back in geodetic coordinates.
std::optional<GpsFix> sample_gps(const dynamics::SimState& truth,
                                 const geo::GeoPoint& origin,
                                 const SensorNoiseConfig& cfg, dynamics::Rng& rng);

// Fused-orientation IMU sample. Roll/pitch are pure noise around the planar
// truth; yaw carries the walking gyro-integrated bias plus noise.
ImuReading sample_imu(const dynamics::SimState& truth, ImuBiasState& bias,
                      const SensorNoiseConfig& cfg, dynamics::Rng& rng);

}  // namespace usv::sensors
