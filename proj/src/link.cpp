#include "leo/link.hpp"

#include <cmath>
#include <stdexcept>

namespace leo::link {

double NoiseModel::noise_power_dbm(double bandwidth_hz) const {
  return n0_dbm_per_hz + 10.0 * std::log10(bandwidth_hz);
}

double path_loss(double distance_m, double carrier_hz) {
  const double v = 4.0 * kPi * distance_m * carrier_hz / GeometryConstants::kSpeedOfLight;
  return v * v;
}

double path_loss_db(double distance_m, double carrier_hz) {
  if (!(distance_m > 0.0) || !(carrier_hz > 0.0))
    throw std::invalid_argument("path loss needs positive distance and frequency");
  return 20.0 * std::log10(4.0 * kPi * distance_m * carrier_hz / GeometryConstants::kSpeedOfLight);
}

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

double snr_db(const orbit::ShellConfig& shell, double distance_m, double attenuation_db,
              const NoiseModel& noise) {
  return watts_to_dbm(shell.tx_power_w) + shell.antenna_gain_dbi + noise.user_gain_dbi -
         path_loss_db(distance_m, shell.carrier_hz) - attenuation_db - noise.pointing_loss_db -
         noise.noise_power_dbm(shell.bandwidth_hz);
}

double snr(const orbit::ShellConfig& shell, double distance_m, double attenuation,
           const NoiseModel& noise) {
  if (attenuation < 1.0) throw std::invalid_argument("attenuation must be >= 1 (linear)");
  return db_to_linear(snr_db(shell, distance_m, linear_to_db(attenuation), noise));
}

double achievable_rate(double snr_linear, double bandwidth_hz, double dmax_m, double range_m) {
  if (dmax_m > range_m) return 0.0;
  return bandwidth_hz * std::log2(1.0 + snr_linear);
}

LinkTable build_link_table(const LinkContext& ctx, const std::vector<orbit::SatelliteState>& now,
                           const std::vector<orbit::SatelliteState>& next,
                           const std::vector<int>& visible, const std::vector<int>& cells) {
  if (ctx.constellation == nullptr || ctx.grid == nullptr)
    throw std::invalid_argument("link context is incomplete");
  LinkTable table;
  table.visible = visible;
  table.cells = cells;
  table.frame = now.empty() ? 0 : now.front().frame;
  for (std::size_t vi = 0; vi < visible.size(); ++vi) {
    const auto& sat = now[static_cast<std::size_t>(visible[vi])];
    const auto& sat_next = next[static_cast<std::size_t>(visible[vi])];
    const auto& shell = ctx.constellation->shells[static_cast<std::size_t>(sat.shell)];
    const double range = orbit::slant_range_max(shell.altitude_m, shell.min_elevation_deg);
    for (const int c : cells) {
      const auto& cell = ctx.grid->cells[static_cast<std::size_t>(c)];
      const double d = orbit::cell_distance(sat, cell);
      if (d > range) continue;
      LinkState ls;
      ls.sat = static_cast<int>(vi);
      ls.sat_id = sat.sat_id;
      ls.shell = sat.shell;
      ls.cell = c;
      ls.frame = sat.frame;
      ls.distance_m = d;
      ls.dmax_m = std::max(d, orbit::cell_distance(sat_next, cell));
      ls.elevation_deg = geo::elevation_deg(cell.centroid_ecef, sat.position);
      ls.path_loss_db = path_loss_db(d, shell.carrier_hz);
      // Lower bands are treated as transparent to rain.
      if (ctx.rain != nullptr) ls.rain_rate_mmh = rain::rain_rate(*ctx.rain, c);
      if (ctx.rain != nullptr && shell.sensing_capable()) {
        const double slant_km = (sat.position - cell.centroid_ecef).norm() / 1e3;
        ls.attenuation_db = rain::rain_attenuation_db(shell, ls.elevation_deg, ls.rain_rate_mmh,
                                                      ctx.rain_height_km, slant_km);
      }
      ls.clear_sky_snr = db_to_linear(snr_db(shell, d, 0.0, ctx.noise));
      ls.snr = db_to_linear(snr_db(shell, d, ls.attenuation_db, ctx.noise));
      ls.in_range = ls.dmax_m <= range;
      ls.rate_bps = achievable_rate(ls.snr, shell.bandwidth_hz, ls.dmax_m, range);
      table.links.push_back(ls);
    }
  }
  return table;
}

}  // namespace leo::link
