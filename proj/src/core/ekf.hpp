#pragma once

#include <Eigen/Dense>
#include <vector>

#include "geo.hpp"
#include "sensors.hpp"

namespace usv::ekf {

// State layout: [x y z roll pitch yaw u v w p q r]
inline constexpr int kStateDim = 12;
enum StateIndex {
  kX = 0, kY, kZ, kRoll, kPitch, kYaw, kU, kV, kW, kP, kQ, kR
};

using StateVector = Eigen::Matrix<double, kStateDim, 1>;
using StateMatrix = Eigen::Matrix<double, kStateDim, kStateDim>;

struct EkfState {
  double t = 0.0;
  StateVector x = StateVector::Zero();
  StateMatrix P = StateMatrix::Identity();
};

struct ProcessConfig {
  StateMatrix Q;   // continuous-time rate; scaled by dt in predict
  StateMatrix P0;
  bool gate_enabled = false;  // optional Mahalanobis innovation gate
  double gate_sigma = 3.0;
  double stale_tolerance = 0.5;  // s; older measurements are dropped

  ProcessConfig();
};

// Partial measurement: observes x(indices) with covariance R. Angle
// components get their innovations wrapped to (-pi, pi].
struct Measurement {
  double t = 0.0;
  std::vector<int> indices;  // strictly increasing subset of [0, 12)
  Eigen::VectorXd z;
  Eigen::MatrixXd R;
  std::vector<bool> is_angle;

  bool valid() const;
};

enum class CorrectOutcome { kApplied, kGated };

struct StreamStats {
  int applied = 0;
  int gated = 0;
  int dropped_stale = 0;
};

// Constant-velocity 3D kinematic transition: pose integrates the rotated
// body velocities, Euler angles integrate the mapped body rates.
StateVector f_kinematic(const StateVector& x, double dt);

// Analytic Jacobian of f_kinematic at x.
StateMatrix jacobian_F(const StateVector& x, double dt);

// x <- f(x); P <- F P F^T + Q*dt; P re-symmetrized.
EkfState predict(const EkfState& s, double dt, const ProcessConfig& cfg);

// Joseph-form correction with angle-wrapped innovation. Throws
// std::runtime_error if the innovation covariance is not invertible.
EkfState correct(const EkfState& s, const Measurement& m,
                 const ProcessConfig& cfg, CorrectOutcome* outcome = nullptr);

// GPS position -> {x, y, z} measurement in the local ENU frame.
// Throws std::invalid_argument for an invalid fix.
Measurement fuse_gps(const sensors::GpsFix& fix, const geo::GeoPoint& origin);

// IMU attitude + body rates -> {roll, pitch, yaw, p, q, r} measurement.
Measurement fuse_imu(const sensors::ImuReading& reading);

// Predict-to-time / correct over a time-ordered stream; emits the
// post-correction state per applied measurement.
std::vector<EkfState> process_stream(const EkfState& init,
                                     const std::vector<Measurement>& measurements,
                                     const ProcessConfig& cfg,
                                     StreamStats* stats = nullptr);

}  // namespace usv::ekf
