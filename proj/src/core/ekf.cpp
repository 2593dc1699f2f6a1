#include "ekf.hpp"

#include <cmath>
#include <stdexcept>

namespace usv::ekf {

ProcessConfig::ProcessConfig() {
  StateVector q;
  q << 1e-4, 1e-4, 1e-4,       // position
       1e-4, 1e-4, 1e-4,       // angles
       1e-2, 1e-2, 1e-2,       // linear velocity
       1e-2, 1e-2, 1e-2;       // angular velocity
  Q = q.asDiagonal();
  StateVector p0;
  p0 << 10, 10, 10, 0.5, 0.5, 0.5, 1, 1, 1, 1, 1, 1;
  P0 = p0.asDiagonal();
}

bool Measurement::valid() const {
  const auto k = static_cast<Eigen::Index>(indices.size());
  if (k == 0 || z.size() != k || R.rows() != k || R.cols() != k ||
      is_angle.size() != indices.size())
    return false;
  for (size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= kStateDim) return false;
    if (i > 0 && indices[i] <= indices[i - 1]) return false;
  }
  return true;
}

StateVector f_kinematic(const StateVector& x, double dt) {
  if (dt < 0.0) throw std::invalid_argument("f_kinematic: negative dt");
  const Eigen::Vector3d vel = x.segment<3>(kU);
  const Eigen::Vector3d rates = x.segment<3>(kP);
  const Eigen::Matrix3d rot =
      geo::rotation_world_from_body(x(kRoll), x(kPitch), x(kYaw));
  const Eigen::Matrix3d erate = geo::euler_rate_matrix(x(kRoll), x(kPitch));

  StateVector out = x;
  out.segment<3>(kX) += rot * vel * dt;
  const Eigen::Vector3d ang = x.segment<3>(kRoll) + erate * rates * dt;
  out(kRoll) = geo::wrap_angle(ang.x());
  out(kPitch) = geo::wrap_angle(ang.y());
  out(kYaw) = geo::wrap_angle(ang.z());
  return out;
}

namespace {

// d/d(roll,theta,psi) of R_wb, one matrix per angle.
void rotation_partials(double roll, double pitch, double yaw,
                       Eigen::Matrix3d& d_roll, Eigen::Matrix3d& d_pitch,
                       Eigen::Matrix3d& d_yaw) {
  const double sr = std::sin(roll), cr = std::cos(roll);
  const double sp = std::sin(pitch), cp = std::cos(pitch);
  const double sy = std::sin(yaw), cy = std::cos(yaw);

  Eigen::Matrix3d rx, ry, rz, drx, dry, drz;
  rx << 1, 0, 0, 0, cr, -sr, 0, sr, cr;
  ry << cp, 0, sp, 0, 1, 0, -sp, 0, cp;
  rz << cy, -sy, 0, sy, cy, 0, 0, 0, 1;
  drx << 0, 0, 0, 0, -sr, -cr, 0, cr, -sr;
  dry << -sp, 0, cp, 0, 0, 0, -cp, 0, -sp;
  drz << -sy, -cy, 0, cy, -sy, 0, 0, 0, 0;

  d_roll = rz * ry * drx;
  d_pitch = rz * dry * rx;
  d_yaw = drz * ry * rx;
}

}  // namespace

StateMatrix jacobian_F(const StateVector& x, double dt) {
  if (dt < 0.0) throw std::invalid_argument("jacobian_F: negative dt");
  const double roll = x(kRoll), pitch = x(kPitch), yaw = x(kYaw);
  const Eigen::Vector3d vel = x.segment<3>(kU);
  const Eigen::Vector3d rates = x.segment<3>(kP);

  const Eigen::Matrix3d rot = geo::rotation_world_from_body(roll, pitch, yaw);
  const Eigen::Matrix3d erate = geo::euler_rate_matrix(roll, pitch);

  Eigen::Matrix3d d_roll, d_pitch, d_yaw;
  rotation_partials(roll, pitch, yaw, d_roll, d_pitch, d_yaw);

  StateMatrix F = StateMatrix::Identity();
  // position wrt angles
  F.block<3, 1>(kX, kRoll) = d_roll * vel * dt;
  F.block<3, 1>(kX, kPitch) = d_pitch * vel * dt;
  F.block<3, 1>(kX, kYaw) = d_yaw * vel * dt;
  // position wrt body velocity
  F.block<3, 3>(kX, kU) = rot * dt;

  // angles wrt angles: I + dt * d(E w)/d(roll,pitch); no yaw dependence
  const double sr = std::sin(roll), cr = std::cos(roll);
  const double cp = std::cos(pitch), tp = std::tan(pitch);
  const double q = rates.y(), r = rates.z();
  Eigen::Vector3d dEw_droll(cr * tp * q - sr * tp * r,
                            -sr * q - cr * r,
                            (cr * q - sr * r) / cp);
  Eigen::Vector3d dEw_dpitch((sr * q + cr * r) / (cp * cp),
                             0.0,
                             (sr * q + cr * r) * tp / cp);
  F.block<3, 1>(kRoll, kRoll) += dEw_droll * dt;
  F.block<3, 1>(kRoll, kPitch) += dEw_dpitch * dt;
  // angles wrt body rates
  F.block<3, 3>(kRoll, kP) = erate * dt;
  return F;
}

EkfState predict(const EkfState& s, double dt, const ProcessConfig& cfg) {
  if (dt < 0.0) throw std::invalid_argument("predict: negative dt");
  EkfState out;
  out.t = s.t + dt;
  out.x = f_kinematic(s.x, dt);
  const StateMatrix F = jacobian_F(s.x, dt);
  out.P = F * s.P * F.transpose() + cfg.Q * dt;
  out.P = ((out.P + out.P.transpose()) / 2.0).eval();
  return out;
}

EkfState correct(const EkfState& s, const Measurement& m,
                 const ProcessConfig& cfg, CorrectOutcome* outcome) {
  if (!m.valid()) throw std::invalid_argument("correct: malformed measurement");
  const auto k = static_cast<Eigen::Index>(m.indices.size());

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(k, kStateDim);
  for (Eigen::Index i = 0; i < k; ++i) H(i, m.indices[i]) = 1.0;

  Eigen::VectorXd innovation = m.z - H * s.x;
  for (Eigen::Index i = 0; i < k; ++i)
    if (m.is_angle[i]) innovation(i) = geo::wrap_angle(innovation(i));

  const Eigen::MatrixXd S = H * s.P * H.transpose() + m.R;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
  if (!lu.isInvertible())
    throw std::runtime_error("correct: singular innovation covariance");

  if (cfg.gate_enabled) {
    const double mahal2 = innovation.dot(lu.solve(innovation));
    if (mahal2 > cfg.gate_sigma * cfg.gate_sigma * static_cast<double>(k)) {
      if (outcome) *outcome = CorrectOutcome::kGated;
      return s;
    }
  }

  const Eigen::MatrixXd K = s.P * H.transpose() * lu.inverse();

  EkfState out;
  out.t = s.t;
  out.x = s.x + K * innovation;
  out.x(kRoll) = geo::wrap_angle(out.x(kRoll));
  out.x(kPitch) = geo::wrap_angle(out.x(kPitch));
  out.x(kYaw) = geo::wrap_angle(out.x(kYaw));

  const StateMatrix ikh = StateMatrix::Identity() - K * H;
  out.P = ikh * s.P * ikh.transpose() + K * m.R * K.transpose();
  out.P = ((out.P + out.P.transpose()) / 2.0).eval();
  if (outcome) *outcome = CorrectOutcome::kApplied;
  return out;
}

Measurement fuse_gps(const sensors::GpsFix& fix, const geo::GeoPoint& origin) {
  if (!fix.valid || !fix.point.valid() || fix.horizontal_std <= 0.0)
    throw std::invalid_argument("fuse_gps: invalid fix");
  Measurement m;
  m.t = fix.t;
  m.indices = {kX, kY, kZ};
  m.z = geo::enu_from_geodetic(origin, fix.point);
  const double s2 = fix.horizontal_std * fix.horizontal_std;
  m.R = Eigen::Vector3d(s2, s2, 4.0 * s2).asDiagonal();
  m.is_angle = {false, false, false};
  return m;
}

Measurement fuse_imu(const sensors::ImuReading& reading) {
  Measurement m;
  m.t = reading.t;
  m.indices = {kRoll, kPitch, kYaw, kP, kQ, kR};
  m.z = Eigen::VectorXd(6);
  m.z << reading.roll, reading.pitch, reading.yaw, reading.rate_x,
      reading.rate_y, reading.rate_z;
  const double a2 = reading.orientation_std * reading.orientation_std;
  const double r2 = reading.rate_std * reading.rate_std;
  Eigen::VectorXd diag(6);
  diag << a2, a2, a2, r2, r2, r2;
  m.R = diag.asDiagonal();
  m.is_angle = {true, true, true, false, false, false};
  return m;
}

std::vector<EkfState> process_stream(const EkfState& init,
                                     const std::vector<Measurement>& measurements,
                                     const ProcessConfig& cfg, StreamStats* stats) {
  std::vector<EkfState> out;
  out.reserve(measurements.size());
  EkfState s = init;
  StreamStats local;
  for (const auto& m : measurements) {
    if (m.t < s.t - cfg.stale_tolerance) {
      ++local.dropped_stale;
      continue;
    }
    if (m.t > s.t) s = predict(s, m.t - s.t, cfg);
    CorrectOutcome oc;
    s = correct(s, m, cfg, &oc);
    if (oc == CorrectOutcome::kGated)
      ++local.gated;
    else
      ++local.applied;
    out.push_back(s);
  }
  if (stats) *stats = local;
  return out;
}

}  // namespace usv::ekf
