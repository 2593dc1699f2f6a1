#include "dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "geo.hpp"

namespace usv::dynamics {

bool VesselParams::valid() const {
  const bool positives = length > 0 && beam > 0 && mass > 0 && yaw_inertia > 0 &&
                         thruster_halfspan > 0 && max_thrust > 0 &&
                         reverse_thrust_factor > 0 && drag_surge_lin > 0 &&
                         drag_surge_quad > 0 && drag_sway_lin > 0 &&
                         drag_sway_quad > 0 && drag_yaw_lin > 0 && drag_yaw_quad > 0;
  return positives && deadband >= 0.0 && deadband < 0.2 &&
         thruster_halfspan < beam / 2.0;
}

bool SimState::finite() const {
  return std::isfinite(t) && std::isfinite(x) && std::isfinite(y) &&
         std::isfinite(yaw) && std::isfinite(u) && std::isfinite(v) &&
         std::isfinite(r);
}

bool Environment::valid() const {
  return std::isfinite(current_east) && std::isfinite(current_north) &&
         disturbance_force_std >= 0.0 && disturbance_torque_std >= 0.0;
}

double thrust_from_command(double cmd, const VesselParams& params) {
  cmd = std::clamp(cmd, -1.0, 1.0);
  const double mag = std::abs(cmd);
  if (mag <= params.deadband) return 0.0;
  const double frac = (mag - params.deadband) / (1.0 - params.deadband);
  double t = params.max_thrust * frac * frac;
  if (cmd < 0.0) t *= -params.reverse_thrust_factor;
  return t;
}

ThrusterCommand mix_differential(double throttle, double steer) {
  ThrusterCommand cmd;
  cmd.left = std::clamp(throttle - steer, -1.0, 1.0);
  cmd.right = std::clamp(throttle + steer, -1.0, 1.0);
  return cmd;
}

namespace {

struct Derivs {
  double dx, dy, dyaw, du, dv, dr;
};

Derivs derivs(const SimState& s, double thrust_left, double thrust_right,
              double fx_dist, double fy_dist, double torque_dist,
              const Environment& env, const VesselParams& p) {
  Derivs d;
  const double cy = std::cos(s.yaw), sy = std::sin(s.yaw);
  d.dx = cy * s.u - sy * s.v + env.current_east;
  d.dy = sy * s.u + cy * s.v + env.current_north;
  d.dyaw = s.r;
  const double drag_u = p.drag_surge_lin * s.u + p.drag_surge_quad * s.u * std::abs(s.u);
  const double drag_v = p.drag_sway_lin * s.v + p.drag_sway_quad * s.v * std::abs(s.v);
  const double drag_r = p.drag_yaw_lin * s.r + p.drag_yaw_quad * s.r * std::abs(s.r);
  d.du = (thrust_left + thrust_right - drag_u + fx_dist) / p.mass + s.v * s.r;
  d.dv = (-drag_v + fy_dist) / p.mass - s.u * s.r;
  d.dr = ((thrust_right - thrust_left) * p.thruster_halfspan - drag_r + torque_dist) /
         p.yaw_inertia;
  return d;
}

SimState advance(const SimState& s, const Derivs& d, double h) {
  SimState n = s;
  n.x += d.dx * h;
  n.y += d.dy * h;
  n.yaw += d.dyaw * h;
  n.u += d.du * h;
  n.v += d.dv * h;
  n.r += d.dr * h;
  return n;
}

}  // namespace

SimState step(const SimState& state, const ThrusterCommand& cmd,
              const Environment& env, const VesselParams& params, double dt,
              Rng& rng) {
  if (!state.finite()) throw std::invalid_argument("step: non-finite state");
  if (!(dt > 0.0 && dt <= 0.1))
    throw std::invalid_argument("step: dt outside (0, 0.1]");

  const double tl = thrust_from_command(std::clamp(cmd.left, -1.0, 1.0), params);
  const double tr = thrust_from_command(std::clamp(cmd.right, -1.0, 1.0), params);

  double fx = 0.0, fy = 0.0, tq = 0.0;
  if (env.disturbance_force_std > 0.0) {
    std::normal_distribution<double> force(0.0, env.disturbance_force_std);
    fx = force(rng);
    fy = force(rng);
  }
  if (env.disturbance_torque_std > 0.0) {
    std::normal_distribution<double> torque(0.0, env.disturbance_torque_std);
    tq = torque(rng);
  }

  const Derivs k1 = derivs(state, tl, tr, fx, fy, tq, env, params);
  const Derivs k2 = derivs(advance(state, k1, dt / 2), tl, tr, fx, fy, tq, env, params);
  const Derivs k3 = derivs(advance(state, k2, dt / 2), tl, tr, fx, fy, tq, env, params);
  const Derivs k4 = derivs(advance(state, k3, dt), tl, tr, fx, fy, tq, env, params);

  SimState out = state;
  out.x += dt / 6.0 * (k1.dx + 2 * k2.dx + 2 * k3.dx + k4.dx);
  out.y += dt / 6.0 * (k1.dy + 2 * k2.dy + 2 * k3.dy + k4.dy);
  out.yaw = geo::wrap_angle(state.yaw + dt / 6.0 * (k1.dyaw + 2 * k2.dyaw + 2 * k3.dyaw + k4.dyaw));
  out.u += dt / 6.0 * (k1.du + 2 * k2.du + 2 * k3.du + k4.du);
  out.v += dt / 6.0 * (k1.dv + 2 * k2.dv + 2 * k3.dv + k4.dv);
  out.r += dt / 6.0 * (k1.dr + 2 * k2.dr + 2 * k3.dr + k4.dr);
  out.t = state.t + dt;
  return out;
}

double find_steady_speed(double throttle, const VesselParams& params,
                         const Environment& env) {
  if (throttle <= 0.0) return 0.0;
  Environment calm = env;
  calm.disturbance_force_std = 0.0;
  calm.disturbance_torque_std = 0.0;
  calm.current_east = 0.0;
  calm.current_north = 0.0;

  const double dt = 0.02;
  const int window = static_cast<int>(5.0 / dt);
  Rng rng(0);
  SimState s;
  ThrusterCommand cmd{throttle, throttle};
  double window_start_u = 0.0;
  int since_window = 0;
  while (s.t < 600.0) {
    s = step(s, cmd, calm, params, dt, rng);
    if (++since_window >= window) {
      if (std::abs(s.u - window_start_u) < 1e-4) return s.u;
      window_start_u = s.u;
      since_window = 0;
    }
  }
  throw std::runtime_error("find_steady_speed: no convergence within 600 s");
}

}  // namespace usv::dynamics
