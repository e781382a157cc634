#include "leo/orbit.hpp"

#include <cmath>
#include <stdexcept>

#include "leo/simd/kernels.hpp"

namespace leo::orbit {

using C = GeometryConstants;

void ShellConfig::validate() const {
  if (altitude_m < 400e3 || altitude_m > 2000e3)
    throw std::invalid_argument("shell " + id + ": altitude outside [400 km, 2000 km]");
  if (plane_count < 1 || sats_per_plane < 1)
    throw std::invalid_argument("shell " + id + ": plane and satellite counts must be positive");
  if (!(carrier_hz > 0.0) || !(bandwidth_hz > 0.0) || !(tx_power_w > 0.0))
    throw std::invalid_argument("shell " + id + ": radio parameters must be positive");
  if (!(min_elevation_deg > 0.0) || min_elevation_deg > 90.0)
    throw std::invalid_argument("shell " + id + ": minimum elevation must lie in (0, 90]");
  if (inclination_deg < 0.0 || inclination_deg > 180.0)
    throw std::invalid_argument("shell " + id + ": inclination must lie in [0, 180]");
}

int Constellation::total() const {
  int n = 0;
  for (const auto& s : shells) n += s.total();
  return n;
}

int Constellation::first_id(int shell) const {
  int n = 0;
  for (int i = 0; i < shell; ++i) n += shells[static_cast<std::size_t>(i)].total();
  return n;
}

double orbital_velocity(double altitude_m) {
  return std::sqrt(C::kGM / (C::kEarthRadius + altitude_m));
}

double orbital_period(double altitude_m) {
  return 2.0 * kPi * (C::kEarthRadius + altitude_m) / orbital_velocity(altitude_m);
}

std::vector<SatelliteState> propagate(const Constellation& constellation, long k, double frame_s) {
  if (k < 0) throw std::invalid_argument("frame index must be nonnegative");
  const double t = static_cast<double>(k) * frame_s;
  const double earth_angle = C::kEarthRotationRate * t;
  const double ce = std::cos(earth_angle), se = std::sin(earth_angle);
  std::vector<SatelliteState> out;
  out.reserve(static_cast<std::size_t>(constellation.total()));
  int sat_id = 0;
  for (std::size_t si = 0; si < constellation.shells.size(); ++si) {
    const ShellConfig& shell = constellation.shells[si];
    const double radius = C::kEarthRadius + shell.altitude_m;
    const double mean_motion = orbital_velocity(shell) / radius;
    const double advance = std::fmod(mean_motion * t, 2.0 * kPi);
    const double inc = deg2rad(shell.inclination_deg);
    const double ci = std::cos(inc), sinc = std::sin(inc);
    for (int p = 0; p < shell.plane_count; ++p) {
      const double raan = 2.0 * kPi * p / shell.plane_count + shell.raan_offset_rad;
      const double co = std::cos(raan), so = std::sin(raan);
      for (int j = 0; j < shell.sats_per_plane; ++j) {
        double u = 2.0 * kPi * j / shell.sats_per_plane + advance;
        u = std::fmod(u, 2.0 * kPi);
        if (u < 0.0) u += 2.0 * kPi;
        const double cu = std::cos(u), su = std::sin(u);
        // Inertial position on the circular orbit.
        const double xi = radius * (co * cu - so * su * ci);
        const double yi = radius * (so * cu + co * su * ci);
        const double zi = radius * (su * sinc);
        SatelliteState s;
        s.sat_id = sat_id++;
        s.shell = static_cast<int>(si);
        s.plane = p;
        s.slot = j;
        s.position = {ce * xi + se * yi, -se * xi + ce * yi, zi};
        s.raan_rad = raan;
        s.arg_latitude_rad = u;
        s.frame = k;
        out.push_back(s);
      }
    }
  }
  return out;
}

double slant_range_max(double altitude_m, double elevation_deg) {
  const double re = C::kEarthRadius;
  const double s = std::sin(deg2rad(elevation_deg));
  return std::sqrt(re * re * s * s + 2.0 * re * altitude_m + altitude_m * altitude_m) - re * s;
}

double cell_distance(const SatelliteState& sat, const ground::Cell& cell) {
  const double origin[3] = {sat.position.x(), sat.position.y(), sat.position.z()};
  return std::sqrt(simd::max_distance_sq(origin, cell.sample_x, cell.sample_y, cell.sample_z));
}

std::vector<int> visible_satellites(const Constellation& constellation,
                                    const std::vector<SatelliteState>& now,
                                    const std::vector<SatelliteState>& next,
                                    const ground::CellGrid& grid, const std::vector<int>& cells,
                                    std::optional<double> elevation_override_deg) {
  if (now.size() != next.size()) throw std::invalid_argument("frame state sizes differ");
  std::vector<double> range(constellation.shells.size());
  for (std::size_t i = 0; i < range.size(); ++i) {
    const auto& sh = constellation.shells[i];
    range[i] = slant_range_max(sh.altitude_m, elevation_override_deg.value_or(sh.min_elevation_deg));
  }
  // Centroid-to-satellite prefilter: a cell can only be within range if its
  // centroid is within range plus the cell's half diagonal.
  const double step = deg2rad(grid.region.cell_step_deg) * C::kEarthRadius;
  const double slack = step * std::sqrt(2.0);
  std::vector<int> out;
  for (std::size_t i = 0; i < now.size(); ++i) {
    const double r = range[static_cast<std::size_t>(now[i].shell)];
    for (const int c : cells) {
      const auto& cell = grid.cells[static_cast<std::size_t>(c)];
      if ((now[i].position - cell.centroid_ecef).norm() > r + slack) continue;
      if (cell_distance(now[i], cell) <= r && cell_distance(next[i], cell) <= r) {
        out.push_back(static_cast<int>(i));
        break;
      }
    }
  }
  return out;
}

double max_propagation_time(const std::vector<ShellConfig>& shells,
                            std::optional<double> elevation_override_deg) {
  if (shells.empty()) throw std::invalid_argument("shell list is empty");
  double best = 0.0;
  for (const auto& sh : shells)
    best = std::max(best, slant_range_max(sh.altitude_m,
                                          elevation_override_deg.value_or(sh.min_elevation_deg)));
  return best / C::kSpeedOfLight;
}

}  // namespace leo::orbit
