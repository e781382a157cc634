#include "leo/rain.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace leo::rain {

void RainParams::validate() const {
  if (!(intensity_per_km2 > 0.0) || !(mean_radius_km > 0.0) || !(mean_rate_mmh > 0.0) ||
      !(mean_active_h > 0.0) || !(mean_inactive_h > 0.0) || !(rain_height_km > 0.0))
    throw std::invalid_argument("rain parameters must be strictly positive");
  if (guard_factor < 0.0) throw std::invalid_argument("rain guard factor must be nonnegative");
}

LocalProjection LocalProjection::centred_on(const ground::Region& region) {
  return {0.5 * (region.lat_min + region.lat_max), 0.5 * (region.lon_min + region.lon_max)};
}

void LocalProjection::to_km(double lat_deg, double lon_deg, double& x_km, double& y_km) const {
  const double r_km = GeometryConstants::kEarthRadius / 1e3;
  x_km = r_km * deg2rad(lon_deg - lon0_deg) * std::cos(deg2rad(lat0_deg));
  y_km = r_km * deg2rad(lat_deg - lat0_deg);
}

DtmcProbs dtmc_probs(const RainParams& params, double frame_s) {
  if (!(frame_s > 0.0)) throw std::invalid_argument("frame length must be positive");
  const double t_h = frame_s / 3600.0;
  DtmcProbs p;
  p.p_off = -std::expm1(-t_h / params.mean_active_h);
  p.p_on = -std::expm1(-t_h / params.mean_inactive_h);
  p.pi_on = p.p_on / (p.p_on + p.p_off);
  return p;
}

RainField init_field(const ground::CellGrid& grid, const RainParams& params, double frame_s,
                     std::uint64_t seed) {
  params.validate();
  RainField field;
  field.projection = LocalProjection::centred_on(grid.region);
  double x0, y0, x1, y1;
  field.projection.to_km(grid.region.lat_min, grid.region.lon_min, x0, y0);
  field.projection.to_km(grid.region.lat_max, grid.region.lon_max, x1, y1);
  const double guard = params.guard_factor * params.mean_radius_km;
  x0 -= guard;
  y0 -= guard;
  x1 += guard;
  y1 += guard;
  field.area_km2 = (x1 - x0) * (y1 - y0);

  Rng rng = make_rng(seed, "rain.init");
  std::poisson_distribution<long> count(params.intensity_per_km2 * field.area_km2);
  std::uniform_real_distribution<double> ux(x0, x1), uy(y0, y1);
  std::exponential_distribution<double> size(1.0 / params.mean_radius_km);
  std::exponential_distribution<double> rate(1.0 / params.mean_rate_mmh);
  std::bernoulli_distribution on(dtmc_probs(params, frame_s).pi_on);
  const long n = count(rng);
  field.cells.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    RainCell rc;
    rc.x_km = ux(rng);
    rc.y_km = uy(rng);
    const double mark = size(rng);
    rc.radius_km = params.mark_is_radius ? mark : 0.5 * mark;
    rc.rate_mmh = rate(rng);
    rc.active = on(rng);
    field.cells.push_back(rc);
  }
  build_coverage(field, grid);
  return field;
}

void build_coverage(RainField& field, const ground::CellGrid& grid) {
  field.coverage.assign(grid.cells.size(), {});
  for (std::size_t c = 0; c < grid.cells.size(); ++c) {
    double cx, cy;
    field.projection.to_km(grid.cells[c].centroid_lat, grid.cells[c].centroid_lon, cx, cy);
    for (std::size_t r = 0; r < field.cells.size(); ++r) {
      const auto& rc = field.cells[r];
      if (std::hypot(rc.x_km - cx, rc.y_km - cy) <= rc.radius_km)
        field.coverage[c].push_back(static_cast<int>(r));
    }
  }
}

void step(RainField& field, const DtmcProbs& probs, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& rc : field.cells) {
    const double draw = u(rng);
    if (rc.active) {
      if (draw < probs.p_off) rc.active = false;
    } else if (draw < probs.p_on) {
      rc.active = true;
    }
  }
  ++field.frame;
}

double rain_rate(const RainField& field, int cell) {
  double sum = 0.0;
  for (const int r : field.coverage[static_cast<std::size_t>(cell)]) {
    const auto& rc = field.cells[static_cast<std::size_t>(r)];
    if (rc.active) sum += rc.rate_mmh;
  }
  return sum;
}

double wet_path_km(double elevation_deg, double rain_height_km, double slant_range_km) {
  if (!(elevation_deg > 0.0)) throw std::invalid_argument("elevation must be positive");
  return std::min(slant_range_km, rain_height_km / std::sin(deg2rad(elevation_deg)));
}

double rain_attenuation_db(const orbit::PowerLaw& law, double elevation_deg, double rate_mmh,
                           double rain_height_km, double slant_range_km) {
  if (rate_mmh < 0.0) throw std::invalid_argument("rain rate must be nonnegative");
  if (rate_mmh == 0.0) return 0.0;
  return law.mu * std::pow(rate_mmh, law.omega) *
         wet_path_km(elevation_deg, rain_height_km, slant_range_km);
}

double rain_attenuation_db(const orbit::ShellConfig& shell, double elevation_deg, double rate_mmh,
                           double rain_height_km, double slant_range_km) {
  if (!shell.rain)
    throw std::invalid_argument("shell " + shell.id + " has no rain power-law coefficients");
  return rain_attenuation_db(*shell.rain, elevation_deg, rate_mmh, rain_height_km,
                             slant_range_km);
}

double invert_power_law(double attenuation_db, const orbit::PowerLaw& law, double path_km) {
  if (attenuation_db < 0.0 || !(path_km > 0.0))
    throw std::invalid_argument("invert_power_law: need A_dB >= 0 and d > 0");
  if (attenuation_db == 0.0) return 0.0;
  return std::pow(attenuation_db / (law.mu * path_km), 1.0 / law.omega);
}

}  // namespace leo::rain
