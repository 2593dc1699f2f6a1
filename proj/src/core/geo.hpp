#pragma once

#include <Eigen/Dense>
#include <vector>

namespace usv::geo {

// WGS-84 equatorial radius, meters.
inline constexpr double kEarthRadius = 6378137.0;

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]
  double alt = 0.0;  // meters above ellipsoid

  bool valid() const;
};

struct EnuPose {
  double x = 0.0;  // m East
  double y = 0.0;  // m North
  double z = 0.0;  // m Up
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
};

// Wraps to (-pi, pi].
double wrap_angle(double a);

// Equirectangular local-tangent conversion. Valid only near the origin
// (|dlat| < 1 deg); throws std::domain_error outside that band.
Eigen::Vector3d enu_from_geodetic(const GeoPoint& origin, const GeoPoint& p);

// Inverse of enu_from_geodetic, same tangent-plane approximation.
GeoPoint geodetic_from_enu(const GeoPoint& origin, const Eigen::Vector3d& enu);

// Removes 2*pi jumps so the series is continuous; output[0] == input[0].
// Throws std::domain_error if an adjacent wrapped difference is >= pi
// (sampling too sparse to disambiguate).
std::vector<double> unwrap_heading(const std::vector<double>& series);

// ZYX (yaw-pitch-roll) body-to-world rotation.
Eigen::Matrix3d rotation_world_from_body(double roll, double pitch, double yaw);

// Maps body rates (p,q,r) to ZYX Euler-angle rates. Throws std::domain_error
// within 0.01 rad of the pitch singularity.
Eigen::Matrix3d euler_rate_matrix(double roll, double pitch);

// Compass heading (deg clockwise from North) -> ENU yaw (rad CCW from East).
double enu_yaw_from_compass_deg(double heading_deg);
double compass_deg_from_enu_yaw(double yaw);

}  // namespace usv::geo
