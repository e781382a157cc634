#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "leo/constants.hpp"

namespace leo::geo {

using Vec3 = Eigen::Vector3d;

/// Point on the spherical Earth (radius R_E) at the given geodetic lat/lon,
/// expressed in the Earth-fixed frame.
inline Vec3 surface_point(double lat_deg, double lon_deg) {
  const double lat = deg2rad(lat_deg);
  const double lon = deg2rad(lon_deg);
  const double r = GeometryConstants::kEarthRadius;
  return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon), r * std::sin(lat)};
}

/// Elevation angle (deg) of `target` seen from the ground point `ground`.
inline double elevation_deg(const Vec3& ground, const Vec3& target) {
  const Vec3 los = target - ground;
  const double s = los.dot(ground.normalized()) / los.norm();
  return rad2deg(std::asin(std::clamp(s, -1.0, 1.0)));
}

}  // namespace leo::geo
