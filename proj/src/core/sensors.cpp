#include "sensors.hpp"

#include <cmath>
#include <stdexcept>

namespace usv::sensors {

std::optional<GpsFix> sample_gps(const dynamics::SimState& truth,
                                 const geo::GeoPoint& origin,
                                 const SensorNoiseConfig& cfg, dynamics::Rng& rng) {
  if (!truth.finite()) throw std::invalid_argument("sample_gps: non-finite truth");
  if (cfg.gps_dropout_prob > 0.0) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) < cfg.gps_dropout_prob) return std::nullopt;
  }
  Eigen::Vector3d enu(truth.x, truth.y, 0.0);
  if (cfg.gps_std > 0.0) {
    std::normal_distribution<double> noise(0.0, cfg.gps_std);
    enu.x() += noise(rng);
    enu.y() += noise(rng);
  }
  GpsFix fix;
  fix.t = truth.t;
  fix.point = geo::geodetic_from_enu(origin, enu);
  fix.horizontal_std = cfg.gps_std;
  fix.valid = true;
  return fix;
}

ImuReading sample_imu(const dynamics::SimState& truth, ImuBiasState& bias,
                      const SensorNoiseConfig& cfg, dynamics::Rng& rng) {
  if (!truth.finite()) throw std::invalid_argument("sample_imu: non-finite truth");

  const double dt = truth.t - bias.last_t;
  if (cfg.gyro_bias_walk_std > 0.0 && dt > 0.0) {
    std::normal_distribution<double> walk(0.0, cfg.gyro_bias_walk_std * std::sqrt(dt));
    bias.gyro_bias_z += walk(rng);
  }
  bias.last_t = truth.t;

  ImuReading out;
  out.t = truth.t;
  out.orientation_std = cfg.imu_yaw_std;
  out.rate_std = cfg.imu_rate_std;

  auto gauss = [&](double std_dev) {
    if (std_dev <= 0.0) return 0.0;
    std::normal_distribution<double> n(0.0, std_dev);
    return n(rng);
  };
  out.roll = geo::wrap_angle(gauss(cfg.imu_yaw_std));
  out.pitch = geo::wrap_angle(gauss(cfg.imu_yaw_std));
  out.yaw = geo::wrap_angle(truth.yaw + gauss(cfg.imu_yaw_std));
  out.rate_x = gauss(cfg.imu_rate_std);
  out.rate_y = gauss(cfg.imu_rate_std);
  out.rate_z = truth.r + bias.gyro_bias_z + gauss(cfg.imu_rate_std);
  return out;
}

}  // namespace usv::sensors
