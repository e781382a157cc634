#pragma once

#include <optional>
#include <string>
#include <vector>

#include "leo/geo.hpp"
#include "leo/ground.hpp"

namespace leo::orbit {

/// Power-law rain coefficients A_dB = mu * rate^omega * path_km for one band.
struct PowerLaw {
  double mu{0.0};
  double omega{1.0};
};

/// One orbital shell of the heterogeneous constellation. Satellites in a
/// shell share their orbit geometry and radio parameters.
struct ShellConfig {
  std::string id;
  double altitude_m{550e3};
  double inclination_deg{53.0};
  int plane_count{1};
  int sats_per_plane{1};
  double carrier_hz{19.95e9};
  double bandwidth_hz{500e6};
  double antenna_gain_dbi{30.5};
  double tx_power_w{75.0};
  double min_elevation_deg{25.0};
  double raan_offset_rad{0.0};
  std::optional<PowerLaw> rain;

  /// K-band and above (>= 12 GHz) can sense rain; lower bands are treated as
  /// unaffected by it.
  bool sensing_capable() const { return carrier_hz >= 12e9; }
  int total() const { return plane_count * sats_per_plane; }
  void validate() const;
};

struct Constellation {
  std::vector<ShellConfig> shells;

  int total() const;
  /// First global satellite id belonging to shell `shell`.
  int first_id(int shell) const;
};

struct SatelliteState {
  int sat_id{0};
  int shell{0};
  int plane{0};
  int slot{0};
  geo::Vec3 position{geo::Vec3::Zero()};  // Earth-fixed, meters
  double raan_rad{0.0};
  double arg_latitude_rad{0.0};  // in [0, 2*pi)
  long frame{0};
};

/// sqrt(G M_E / (R_E + h)).
double orbital_velocity(double altitude_m);
inline double orbital_velocity(const ShellConfig& shell) {
  return orbital_velocity(shell.altitude_m);
}

/// Orbital period 2*pi*(R_E + h) / v.
double orbital_period(double altitude_m);

/// Positions of every satellite at t = k * frame_s. Plane p starts at RAAN
/// 2*pi*p/P (+ shell offset); slot j at argument of latitude 2*pi*j/N. The
/// Earth-fixed frame is rotated by -omega_E * t.
std::vector<SatelliteState> propagate(const Constellation& constellation, long k, double frame_s);

/// Maximum slant range to a ground point at elevation `elevation_deg`.
double slant_range_max(double altitude_m, double elevation_deg);

/// Worst-case distance from the satellite to the cell, sampled over the four
/// corners and the centroid.
double cell_distance(const SatelliteState& sat, const ground::Cell& cell);

/// Indices into `now` of satellites for which at least one of `cells` lies
/// within slant_range_max at both frame k (`now`) and k+1 (`next`).
/// `elevation_override_deg` replaces each shell's minimum elevation when set.
std::vector<int> visible_satellites(const Constellation& constellation,
                                    const std::vector<SatelliteState>& now,
                                    const std::vector<SatelliteState>& next,
                                    const ground::CellGrid& grid, const std::vector<int>& cells,
                                    std::optional<double> elevation_override_deg = std::nullopt);

/// max over shells of slant_range_max(h_s, eta) / c.
double max_propagation_time(const std::vector<ShellConfig>& shells,
                            std::optional<double> elevation_override_deg = std::nullopt);

}  // namespace leo::orbit
