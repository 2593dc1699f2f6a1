#pragma once

#include <cstdint>
#include <random>

namespace usv::dynamics {

struct VesselParams {
  double length = 0.72;             // m
  double beam = 0.41;               // m
  double mass = 4.5;                // kg (not measured on the real vessel)
  double yaw_inertia = 0.18;        // kg m^2
  double thruster_halfspan = 0.16;  // m, lateral offset from centerline
  double max_thrust = 35.0;         // N per thruster
  double deadband = 0.05;           // normalized command
  double reverse_thrust_factor = 0.78;
  double drag_surge_lin = 1.2;   // N / (m/s)
  double drag_surge_quad = 10.0; // N / (m/s)^2
  double drag_sway_lin = 6.0;
  double drag_sway_quad = 40.0;
  double drag_yaw_lin = 0.08;    // N m / (rad/s)
  double drag_yaw_quad = 0.35;   // N m / (rad/s)^2

  bool valid() const;
};

struct SimState {
  double t = 0.0;
  double x = 0.0;    // m East
  double y = 0.0;    // m North
  double yaw = 0.0;  // rad, wrapped
  double u = 0.0;    // m/s surge
  double v = 0.0;    // m/s sway
  double r = 0.0;    // rad/s yaw rate

  bool finite() const;
};

struct ThrusterCommand {
  double left = 0.0;   // normalized, clamped to [-1, 1]
  double right = 0.0;
};

struct Environment {
  double current_east = 0.0;          // m/s ambient current
  double current_north = 0.0;
  double disturbance_force_std = 0.0;   // N, per-step Gaussian on surge/sway
  double disturbance_torque_std = 0.0;  // N m
  std::uint64_t seed = 0;

  bool valid() const;
};

using Rng = std::mt19937_64;

// Deadband + quadratic thrust curve; reverse thrust scaled by
// params.reverse_thrust_factor. Input is clamped to [-1, 1].
double thrust_from_command(double cmd, const VesselParams& params);

// left = throttle - steer, right = throttle + steer, both clamped.
// Positive steer turns to port (counterclockwise).
ThrusterCommand mix_differential(double throttle, double steer);

// One RK4 step of the 3-DOF (surge, sway, yaw) model. Body velocities are
// relative to the water; world position additionally advects with the
// ambient current. Disturbances are sampled once per step and held.
// Throws std::invalid_argument for non-finite state or dt outside (0, 0.1].
SimState step(const SimState& state, const ThrusterCommand& cmd,
              const Environment& env, const VesselParams& params, double dt,
              Rng& rng);

// Straight-line steady speed at the given throttle (both thrusters equal,
// disturbance off). Converges when |du| < 1e-4 m/s over a 5 s window;
// throws std::runtime_error after 600 simulated seconds.
double find_steady_speed(double throttle, const VesselParams& params,
                         const Environment& env);

}  // namespace usv::dynamics
