#include "geo.hpp"

#include <cmath>
#include <stdexcept>

namespace usv::geo {

namespace {
constexpr double kDegToRad = M_PI / 180.0;
}

bool GeoPoint::valid() const {
  return std::isfinite(lat) && std::isfinite(lon) && std::isfinite(alt) &&
         lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
}

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * M_PI);
  if (w <= -M_PI) w += 2.0 * M_PI;  // remainder returns [-pi, pi]
  return w;
}

Eigen::Vector3d enu_from_geodetic(const GeoPoint& origin, const GeoPoint& p) {
  if (!origin.valid() || !p.valid())
    throw std::domain_error("enu_from_geodetic: invalid geodetic point");
  if (std::abs(p.lat - origin.lat) >= 1.0)
    throw std::domain_error(
        "enu_from_geodetic: point outside local tangent approximation domain");
  const double x =
      (p.lon - origin.lon) * kDegToRad * kEarthRadius * std::cos(origin.lat * kDegToRad);
  const double y = (p.lat - origin.lat) * kDegToRad * kEarthRadius;
  return {x, y, p.alt - origin.alt};
}

GeoPoint geodetic_from_enu(const GeoPoint& origin, const Eigen::Vector3d& enu) {
  if (!origin.valid())
    throw std::domain_error("geodetic_from_enu: invalid origin");
  GeoPoint p;
  p.lat = origin.lat + enu.y() / (kDegToRad * kEarthRadius);
  p.lon = origin.lon +
          enu.x() / (kDegToRad * kEarthRadius * std::cos(origin.lat * kDegToRad));
  p.alt = origin.alt + enu.z();
  return p;
}

std::vector<double> unwrap_heading(const std::vector<double>& series) {
  std::vector<double> out;
  out.reserve(series.size());
  if (series.empty()) return out;
  out.push_back(series.front());
  for (size_t i = 1; i < series.size(); ++i) {
    const double step = wrap_angle(series[i] - series[i - 1]);
    if (std::abs(step) >= M_PI)
      throw std::domain_error("unwrap_heading: adjacent samples differ by >= pi");
    out.push_back(out.back() + step);
  }
  return out;
}

Eigen::Matrix3d rotation_world_from_body(double roll, double pitch, double yaw) {
  return (Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

Eigen::Matrix3d euler_rate_matrix(double roll, double pitch) {
  if (std::abs(pitch) >= M_PI / 2.0 - 0.01)
    throw std::domain_error("euler_rate_matrix: pitch too close to +/-pi/2");
  const double sr = std::sin(roll), cr = std::cos(roll);
  const double ct = std::cos(pitch), tt = std::tan(pitch);
  Eigen::Matrix3d e;
  e << 1.0, sr * tt, cr * tt,
       0.0, cr, -sr,
       0.0, sr / ct, cr / ct;
  return e;
}

double enu_yaw_from_compass_deg(double heading_deg) {
  return wrap_angle(M_PI / 2.0 - heading_deg * kDegToRad);
}

double compass_deg_from_enu_yaw(double yaw) {
  double deg = 90.0 - yaw / kDegToRad;
  deg = std::fmod(deg, 360.0);
  if (deg < 0.0) deg += 360.0;
  return deg;
}

}  // namespace usv::geo
