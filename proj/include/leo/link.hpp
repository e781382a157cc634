#pragma once

#include <vector>

#include "leo/ground.hpp"
#include "leo/orbit.hpp"
#include "leo/rain.hpp"

namespace leo::link {

struct NoiseModel {
  double n0_dbm_per_hz{-176.31};
  double pointing_loss_db{0.3};
  double user_gain_dbi{0.0};

  /// sigma^2 = N_0 + 10 log10(B), dBm.
  double noise_power_dbm(double bandwidth_hz) const;
};

/// (4 pi d f / c)^2, linear and in dB.
double path_loss(double distance_m, double carrier_hz);
double path_loss_db(double distance_m, double carrier_hz);

double watts_to_dbm(double watts);
double db_to_linear(double db);
double linear_to_db(double lin);

/// P G_s G_c / (L A l sigma^2) evaluated in dB, returned in dB.
double snr_db(const orbit::ShellConfig& shell, double distance_m, double attenuation_db,
              const NoiseModel& noise);
/// Linear SNR; `attenuation` is linear (>= 1).
double snr(const orbit::ShellConfig& shell, double distance_m, double attenuation,
           const NoiseModel& noise);

/// B log2(1 + snr) when the pair stays in range over the frame, else 0.
double achievable_rate(double snr_linear, double bandwidth_hz, double dmax_m, double range_m);

struct LinkState {
  int sat{0};        // index into the visible-satellite list
  int sat_id{0};
  int shell{0};
  int cell{0};       // cell id in the grid
  long frame{0};
  double distance_m{0.0};  // worst-case distance at frame k
  double dmax_m{0.0};      // max over frames k and k+1
  double elevation_deg{0.0};
  double path_loss_db{0.0};
  double rain_rate_mmh{0.0};
  double attenuation_db{0.0};
  double clear_sky_snr{0.0};  // linear, A = 1
  double snr{0.0};            // linear, true attenuation
  double rate_bps{0.0};
  bool in_range{false};

  double attenuation() const { return db_to_linear(attenuation_db); }
};

/// Every (visible satellite, populated cell) pair that is within range at
/// frame k, ordered by satellite then cell.
struct LinkTable {
  long frame{0};
  std::vector<int> visible;  // indices into the propagated state vector
  std::vector<int> cells;    // populated cell ids
  std::vector<LinkState> links;
};

struct LinkContext {
  const orbit::Constellation* constellation{nullptr};
  const ground::CellGrid* grid{nullptr};
  const rain::RainField* rain{nullptr};  // nullptr: clear sky
  double rain_height_km{6.0};
  NoiseModel noise;
};

LinkTable build_link_table(const LinkContext& ctx, const std::vector<orbit::SatelliteState>& now,
                           const std::vector<orbit::SatelliteState>& next,
                           const std::vector<int>& visible, const std::vector<int>& cells);

}  // namespace leo::link
