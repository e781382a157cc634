#include "leo/ground.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "leo/random.hpp"

namespace leo::ground {
namespace {

int span_steps(double lo, double hi, double step, const char* what) {
  const double n = (hi - lo) / step;
  const double rounded = std::round(n);
  if (rounded < 1.0 || std::abs(n - rounded) > 1e-9 * std::max(1.0, n)) {
    throw std::invalid_argument(std::string("region ") + what +
                                " span is not a positive integer multiple of cell_step_deg");
  }
  return static_cast<int>(rounded);
}

}  // namespace

void Region::validate() const {
  if (!(cell_step_deg > 0.0)) throw std::invalid_argument("cell_step_deg must be positive");
  if (!(lat_min < lat_max)) throw std::invalid_argument("lat_min must be below lat_max");
  if (!(lon_min < lon_max)) throw std::invalid_argument("lon_min must be below lon_max");
  if (lat_min < -90.0 || lat_max > 90.0) throw std::invalid_argument("latitude out of range");
  span_steps(lat_min, lat_max, cell_step_deg, "latitude");
  span_steps(lon_min, lon_max, cell_step_deg, "longitude");
}

int Region::rows() const { return span_steps(lat_min, lat_max, cell_step_deg, "latitude"); }
int Region::cols() const { return span_steps(lon_min, lon_max, cell_step_deg, "longitude"); }

int CellGrid::locate(double lat, double lon) const {
  if (lat < region.lat_min || lat > region.lat_max || lon < region.lon_min || lon > region.lon_max)
    return -1;
  const double step = region.cell_step_deg;
  const int r = std::min(rows - 1, static_cast<int>(std::floor((lat - region.lat_min) / step)));
  const int c = std::min(cols - 1, static_cast<int>(std::floor((lon - region.lon_min) / step)));
  return r * cols + c;
}

std::vector<int> CellGrid::populated_cells() const {
  std::vector<int> out;
  for (const auto& cell : cells)
    if (cell.active_users > 0) out.push_back(cell.id);
  return out;
}

std::int64_t CellGrid::total_active_users() const {
  std::int64_t total = 0;
  for (const auto& cell : cells) total += cell.active_users;
  return total;
}

CellGrid build_grid(const Region& region) {
  region.validate();
  CellGrid grid;
  grid.region = region;
  grid.rows = region.rows();
  grid.cols = region.cols();
  grid.cells.reserve(static_cast<std::size_t>(grid.rows) * grid.cols);
  const double step = region.cell_step_deg;
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      Cell cell;
      cell.id = r * grid.cols + c;
      cell.row = r;
      cell.col = c;
      cell.lat_lo = region.lat_min + r * step;
      cell.lat_hi = cell.lat_lo + step;
      cell.lon_lo = region.lon_min + c * step;
      cell.lon_hi = cell.lon_lo + step;
      cell.centroid_lat = 0.5 * (cell.lat_lo + cell.lat_hi);
      cell.centroid_lon = 0.5 * (cell.lon_lo + cell.lon_hi);
      cell.anchor_lat = cell.centroid_lat;
      cell.anchor_lon = cell.centroid_lon;
      const std::array<std::pair<double, double>, 5> pts{{{cell.lat_lo, cell.lon_lo},
                                                           {cell.lat_lo, cell.lon_hi},
                                                           {cell.lat_hi, cell.lon_lo},
                                                           {cell.lat_hi, cell.lon_hi},
                                                           {cell.centroid_lat, cell.centroid_lon}}};
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const geo::Vec3 p = geo::surface_point(pts[i].first, pts[i].second);
        cell.sample_x[i] = p.x();
        cell.sample_y[i] = p.y();
        cell.sample_z[i] = p.z();
      }
      cell.centroid_ecef = geo::surface_point(cell.centroid_lat, cell.centroid_lon);
      grid.cells.push_back(cell);
    }
  }
  return grid;
}

std::int64_t active_users(double active_fraction, std::int64_t population) {
  if (population <= 0 || active_fraction <= 0.0) return 0;
  const double raw = active_fraction * static_cast<double>(population);
  // 0.001 * 3000 evaluates to 3.0000000000000004; do not let that round up.
  const auto m = static_cast<std::int64_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
  return std::clamp<std::int64_t>(m, 0, population);
}

void apply_active_fraction(CellGrid& grid, double active_fraction) {
  if (active_fraction < 0.0 || active_fraction > 1.0)
    throw std::invalid_argument("active fraction must lie in [0, 1]");
  for (auto& cell : grid.cells) {
    cell.active_fraction = active_fraction;
    cell.active_users = active_users(active_fraction, cell.population);
  }
}

PopulationLoad load_population(CellGrid& grid, std::istream& source, double active_fraction) {
  for (auto& cell : grid.cells) cell.population = 0;
  PopulationLoad report;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "lat,lon,count")
        throw std::runtime_error("population source: expected header 'lat,lon,count'");
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    std::string lat_s, lon_s, count_s;
    if (!std::getline(row, lat_s, ',') || !std::getline(row, lon_s, ',') ||
        !std::getline(row, count_s)) {
      throw std::runtime_error("population source: malformed row at line " +
                               std::to_string(line_no));
    }
    double lat = 0.0, lon = 0.0;
    long long count = 0;
    try {
      lat = std::stod(lat_s);
      lon = std::stod(lon_s);
      count = std::stoll(count_s);
    } catch (const std::exception&) {
      throw std::runtime_error("population source: unparsable row at line " +
                               std::to_string(line_no));
    }
    if (count < 0)
      throw std::runtime_error("population source: negative count at line " +
                               std::to_string(line_no));
    ++report.records;
    const int idx = grid.locate(lat, lon);
    if (idx < 0) {
      ++report.out_of_region_records;
      report.out_of_region_count += count;
      continue;
    }
    grid.cells[static_cast<std::size_t>(idx)].population += count;
    report.in_region_count += count;
  }
  apply_active_fraction(grid, active_fraction);
  return report;
}

PopulationLoad load_population_file(CellGrid& grid, const std::string& path,
                                    double active_fraction) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open population file: " + path);
  return load_population(grid, in, active_fraction);
}

void synth_population(CellGrid& grid, std::uint64_t seed, double mean, double dispersion,
                      double zero_fraction, double active_fraction) {
  if (!(mean > 0.0)) throw std::invalid_argument("synthetic population mean must be positive");
  if (dispersion < 0.0) throw std::invalid_argument("dispersion must be nonnegative");
  if (zero_fraction < 0.0 || zero_fraction > 1.0)
    throw std::invalid_argument("zero_fraction must lie in [0, 1]");
  Rng rng = make_rng(seed, "ground.population");
  const double mu_log = std::log(mean) - 0.5 * dispersion * dispersion;
  std::lognormal_distribution<double> dist(mu_log, dispersion);
  for (auto& cell : grid.cells) {
    const double v = dispersion == 0.0 ? mean : dist(rng);
    cell.population = static_cast<std::int64_t>(std::ceil(v));
  }
  const auto n = grid.cells.size();
  const auto zeros = static_cast<std::size_t>(std::llround(zero_fraction * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 0; i < zeros; ++i) grid.cells[order[i]].population = 0;
  apply_active_fraction(grid, active_fraction);
}

}  // namespace leo::ground
