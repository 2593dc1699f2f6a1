#include <doctest.h>

#include <cmath>
#include <random>

#include "core/geo.hpp"

using namespace usv::geo;

namespace {
// Independent meridian/equatorial arc length for small offsets.
double arc_m(double deg) { return deg * M_PI / 180.0 * kEarthRadius; }
}  // namespace

TEST_CASE("enu_from_geodetic identity at origin") {
  GeoPoint o{53.0, -1.6, 12.0};
  auto v = enu_from_geodetic(o, o);
  CHECK(v.norm() == doctest::Approx(0.0));
}

TEST_CASE("enu_from_geodetic meridian arc") {
  GeoPoint o{53.0, -1.6, 0.0};
  GeoPoint p{53.00001, -1.6, 0.0};
  auto v = enu_from_geodetic(o, p);
  CHECK(v.y() == doctest::Approx(arc_m(1e-5)).epsilon(1e-9));  // ~1.113 m
  CHECK(v.x() == 0.0);
  CHECK(v.z() == 0.0);
}

TEST_CASE("enu_from_geodetic equatorial arc") {
  GeoPoint o{0.0, 0.0, 0.0};
  GeoPoint p{0.0, 0.00001, 0.0};
  auto v = enu_from_geodetic(o, p);
  CHECK(v.x() == doctest::Approx(arc_m(1e-5)).epsilon(1e-9));
  CHECK(v.y() == 0.0);
}

TEST_CASE("enu_from_geodetic rejects points outside approximation domain") {
  GeoPoint o{53.0, -1.6, 0.0};
  CHECK_THROWS_AS(enu_from_geodetic(o, GeoPoint{54.5, -1.6, 0.0}), std::domain_error);
  CHECK_THROWS_AS(enu_from_geodetic(o, GeoPoint{95.0, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("enu offsets negate when lat/lon offsets are reversed") {
  GeoPoint o{53.0, -1.6, 0.0};
  GeoPoint p{53.002, -1.597, 3.0};
  GeoPoint q{o.lat - (p.lat - o.lat), o.lon - (p.lon - o.lon), -3.0};
  auto vp = enu_from_geodetic(o, p);
  auto vq = enu_from_geodetic(o, q);
  CHECK(vp.x() == doctest::Approx(-vq.x()).epsilon(1e-12));
  CHECK(vp.y() == doctest::Approx(-vq.y()).epsilon(1e-12));
}

TEST_CASE("geodetic round trip") {
  GeoPoint o{53.0, -1.6, 5.0};
  GeoPoint p{53.001, -1.598, 9.0};
  auto enu = enu_from_geodetic(o, p);
  auto back = geodetic_from_enu(o, enu);
  CHECK(back.lat == doctest::Approx(p.lat).epsilon(1e-12));
  CHECK(back.lon == doctest::Approx(p.lon).epsilon(1e-12));
  CHECK(back.alt == doctest::Approx(p.alt));
}

TEST_CASE("wrap_angle basics") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(3.0 * M_PI) == doctest::Approx(M_PI));
  CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI));  // half-open boundary
  CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
}

TEST_CASE("wrap_angle idempotent and 2pi periodic") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> dist(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    double a = dist(rng);
    double w = wrap_angle(a);
    CHECK(w > -M_PI);
    CHECK(w <= M_PI);
    CHECK(wrap_angle(w) == doctest::Approx(w).epsilon(1e-15));
    CHECK(wrap_angle(a + 2.0 * M_PI) == doctest::Approx(w).epsilon(1e-9));
    // output congruent to input mod 2pi
    CHECK(std::remainder(w - a, 2.0 * M_PI) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("unwrap_heading") {
  CHECK(unwrap_heading({0.0, 0.0}) == std::vector<double>{0.0, 0.0});

  auto out = unwrap_heading({3.0, -3.0});
  CHECK(out[0] == 3.0);
  CHECK(out[1] == doctest::Approx(3.0 + (2.0 * M_PI - 6.0)));  // +0.283...

  SUBCASE("constant-rate 540 deg turn at 10 Hz") {
    std::vector<double> series;
    const double rate = 0.3;
    for (double t = 0.0; rate * t <= 3.0 * M_PI + 0.1; t += 0.1)
      series.push_back(wrap_angle(rate * t));
    auto u = unwrap_heading(series);
    CHECK(u.back() - u.front() == doctest::Approx(rate * 0.1 * (series.size() - 1))
                                      .epsilon(1e-9));
    CHECK(u.back() - u.front() >= 3.0 * M_PI);
    // wrap of unwrapped reproduces input
    for (size_t i = 0; i < series.size(); ++i)
      CHECK(wrap_angle(u[i]) == doctest::Approx(series[i]).epsilon(1e-9));
  }

  SUBCASE("discontinuity flagged") {
    CHECK_THROWS_AS(unwrap_heading({0.0, M_PI}), std::domain_error);
  }
}

TEST_CASE("rotation_world_from_body") {
  CHECK((rotation_world_from_body(0, 0, 0) - Eigen::Matrix3d::Identity()).norm() ==
        doctest::Approx(0.0));

  // yaw 90 deg maps body-x to world-y
  auto r = rotation_world_from_body(0, 0, M_PI / 2);
  Eigen::Vector3d bx = r * Eigen::Vector3d::UnitX();
  CHECK(bx.x() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(bx.y() == doctest::Approx(1.0));

  std::mt19937 rng(2);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  for (int i = 0; i < 1000; ++i) {
    auto m = rotation_world_from_body(ang(rng), ang(rng), ang(rng));
    CHECK((m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <
          1e-12);
    CHECK(m.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("euler_rate_matrix") {
  CHECK((euler_rate_matrix(0, 0) - Eigen::Matrix3d::Identity()).norm() ==
        doctest::Approx(0.0));

  // level roll, pitched: yaw rate from body r is 1/cos(theta)
  const double theta = 0.7;
  auto e = euler_rate_matrix(0.0, theta);
  Eigen::Vector3d rates = e * Eigen::Vector3d(0, 0, 1);
  CHECK(rates.z() == doctest::Approx(1.0 / std::cos(theta)).epsilon(1e-12));

  CHECK_THROWS_AS(euler_rate_matrix(0.0, M_PI / 2), std::domain_error);
}

TEST_CASE("compass/ENU yaw conversion") {
  CHECK(enu_yaw_from_compass_deg(0.0) == doctest::Approx(M_PI / 2));
  CHECK(enu_yaw_from_compass_deg(90.0) == doctest::Approx(0.0));
  CHECK(compass_deg_from_enu_yaw(M_PI / 2) == doctest::Approx(0.0));
  CHECK(compass_deg_from_enu_yaw(enu_yaw_from_compass_deg(213.5)) ==
        doctest::Approx(213.5));
}
