#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "leo/geo.hpp"

namespace leo::ground {

/// Rectangular lat/lon region tiled by square cells of `cell_step_deg`.
struct Region {
  double lat_min{0.0};
  double lat_max{0.0};
  double lon_min{0.0};
  double lon_max{0.0};
  double cell_step_deg{0.25};

  /// Throws std::invalid_argument unless the spans are positive integer
  /// multiples of the step.
  void validate() const;
  int rows() const;
  int cols() const;
};

struct Cell {
  int id{0};
  int row{0};
  int col{0};
  double lat_lo{0.0}, lat_hi{0.0}, lon_lo{0.0}, lon_hi{0.0};
  double centroid_lat{0.0}, centroid_lon{0.0};
  std::int64_t population{0};  // M_c^max
  double active_fraction{0.0}; // mu_c
  std::int64_t active_users{0};  // M_c = ceil(mu_c * M_c^max)
  double anchor_lat{0.0}, anchor_lon{0.0};

  // Earth-fixed sample points used for the worst-case distance: 4 corners
  // then the centroid.
  std::array<double, 5> sample_x{}, sample_y{}, sample_z{};
  geo::Vec3 centroid_ecef{geo::Vec3::Zero()};
};

struct CellGrid {
  Region region;
  int rows{0};
  int cols{0};
  std::vector<Cell> cells;

  std::size_t size() const { return cells.size(); }
  /// Index of the cell containing (lat, lon), or -1 outside the region.
  /// Points on the outer north/east edges belong to the last row/column.
  int locate(double lat, double lon) const;
  /// Ids of cells with at least one active user.
  std::vector<int> populated_cells() const;
  std::int64_t total_active_users() const;
};

/// Row-major grid, rows ascending in latitude, columns ascending in
/// longitude. The anchor node sits at the cell centroid.
CellGrid build_grid(const Region& region);

/// M_c = ceil(mu * M_c^max), robust to representation error in mu * M.
std::int64_t active_users(double active_fraction, std::int64_t population);

/// Sets mu_c on every cell and recomputes M_c.
void apply_active_fraction(CellGrid& grid, double active_fraction);

struct PopulationLoad {
  std::int64_t records{0};
  std::int64_t out_of_region_records{0};
  std::int64_t out_of_region_count{0};  // summed head count outside the region
  std::int64_t in_region_count{0};
};

/// Accumulates `lat,lon,count` rows (header required) into the grid's
/// populations, replacing any previous values. Rows outside the region are
/// tallied in the returned report. Malformed rows throw std::runtime_error.
PopulationLoad load_population(CellGrid& grid, std::istream& source, double active_fraction);
PopulationLoad load_population_file(CellGrid& grid, const std::string& path,
                                    double active_fraction);

/// Log-normal per-cell counts with the given mean and log-space standard
/// deviation `dispersion`; exactly round(zero_fraction * C) cells are zeroed.
void synth_population(CellGrid& grid, std::uint64_t seed, double mean, double dispersion,
                      double zero_fraction, double active_fraction);

}  // namespace leo::ground
