// Test-only brute-force reference for the filter equations. Written
// independently of the implementation: explicit trig expressions, dense
// matrices, plain inverses.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace oracle {

inline Eigen::Matrix3d rot_zyx(double roll, double pitch, double yaw) {
  const double cr = std::cos(roll), sr = std::sin(roll);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  Eigen::Matrix3d m;
  m << cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
       sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
       -sp, cp * sr, cp * cr;
  return m;
}

inline double wrap(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

// Transition: pose integrates rotated body velocity, Euler angles integrate
// mapped body rates, velocities constant. Angles left unwrapped so central
// differences stay smooth.
inline Eigen::VectorXd f_dense(const Eigen::VectorXd& x, double dt) {
  Eigen::VectorXd out = x;
  const double roll = x(3), pitch = x(4), yaw = x(5);
  out.segment<3>(0) += rot_zyx(roll, pitch, yaw) * x.segment<3>(6) * dt;
  const double p = x(9), q = x(10), r = x(11);
  const double tp = std::tan(pitch), cp = std::cos(pitch);
  out(3) += (p + std::sin(roll) * tp * q + std::cos(roll) * tp * r) * dt;
  out(4) += (std::cos(roll) * q - std::sin(roll) * r) * dt;
  out(5) += (std::sin(roll) / cp * q + std::cos(roll) / cp * r) * dt;
  return out;
}

inline Eigen::MatrixXd jacobian_fd(const Eigen::VectorXd& x, double dt,
                                   double h = 1e-6) {
  Eigen::MatrixXd J(12, 12);
  for (int j = 0; j < 12; ++j) {
    Eigen::VectorXd xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    J.col(j) = (f_dense(xp, dt) - f_dense(xm, dt)) / (2.0 * h);
  }
  return J;
}

struct DenseResult {
  Eigen::VectorXd x;
  Eigen::MatrixXd P;
};

inline DenseResult predict_dense(const Eigen::VectorXd& x, const Eigen::MatrixXd& P,
                                 const Eigen::MatrixXd& Q, double dt) {
  DenseResult out;
  out.x = f_dense(x, dt);
  out.x(3) = wrap(out.x(3));
  out.x(4) = wrap(out.x(4));
  out.x(5) = wrap(out.x(5));
  const Eigen::MatrixXd F = jacobian_fd(x, dt, 1e-7);
  out.P = F * P * F.transpose() + Q * dt;
  out.P = (out.P + out.P.transpose()) / 2.0;
  return out;
}

// Joseph-form correction with a dense selection H built from the index set.
inline DenseResult correct_dense(const Eigen::VectorXd& x, const Eigen::MatrixXd& P,
                                 const std::vector<int>& indices,
                                 const Eigen::VectorXd& z, const Eigen::MatrixXd& R,
                                 const std::vector<bool>& is_angle) {
  const int k = static_cast<int>(indices.size());
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(k, 12);
  for (int i = 0; i < k; ++i) H(i, indices[i]) = 1.0;
  Eigen::VectorXd innov = z - H * x;
  for (int i = 0; i < k; ++i)
    if (is_angle[i]) innov(i) = wrap(innov(i));
  const Eigen::MatrixXd S = H * P * H.transpose() + R;
  const Eigen::MatrixXd K = P * H.transpose() * S.inverse();
  DenseResult out;
  out.x = x + K * innov;
  out.x(3) = wrap(out.x(3));
  out.x(4) = wrap(out.x(4));
  out.x(5) = wrap(out.x(5));
  const Eigen::MatrixXd IKH = Eigen::MatrixXd::Identity(12, 12) - K * H;
  out.P = IKH * P * IKH.transpose() + K * R * K.transpose();
  out.P = (out.P + out.P.transpose()) / 2.0;
  return out;
}

}  // namespace oracle
