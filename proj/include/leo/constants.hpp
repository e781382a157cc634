#pragma once

namespace leo {

/// Physical constants shared by the geometry and link budget.
struct GeometryConstants {
  static constexpr double kGravitational = 6.674e-11;        // m^3 / (kg s^2)
  static constexpr double kEarthMass = 5.9722e24;            // kg
  static constexpr double kGM = 3.986004418e14;              // m^3 / s^2, standard value of G*M_E
  static constexpr double kEarthRadius = 6371.0e3;           // m
  static constexpr double kSpeedOfLight = 299792458.0;       // m/s
  static constexpr double kEarthRotationRate = 7.2921159e-5; // rad/s
};

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace leo
