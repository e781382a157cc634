#pragma once

#include <cstdint>
#include <vector>

#include "leo/ground.hpp"
#include "leo/orbit.hpp"
#include "leo/random.hpp"

namespace leo::rain {

struct RainParams {
  double intensity_per_km2{8.4e-4};  // PPP intensity of rain cells
  double mean_radius_km{22.6};       // mean of the exponential size mark
  double mean_rate_mmh{8.77};
  double mean_active_h{1.886};       // epsilon
  double mean_inactive_h{5.376};     // beta
  double rain_height_km{6.0};
  /// When false the exponential mark is read as the diameter phi_r and the
  /// radius is half of it.
  bool mark_is_radius{true};
  /// Guard band added around the region, in multiples of mean_radius_km.
  double guard_factor{3.0};

  void validate() const;
};

struct RainCell {
  double x_km{0.0};
  double y_km{0.0};
  double radius_km{0.0};
  double rate_mmh{0.0};
  bool active{false};
};

struct DtmcProbs {
  double p_on{0.0};
  double p_off{0.0};
  double pi_on{0.0};
};

/// Equirectangular projection about the region centre, in km.
struct LocalProjection {
  double lat0_deg{0.0};
  double lon0_deg{0.0};
  static LocalProjection centred_on(const ground::Region& region);
  void to_km(double lat_deg, double lon_deg, double& x_km, double& y_km) const;
};

struct RainField {
  std::vector<RainCell> cells;
  /// coverage[c] lists rain cells whose disc contains user cell c's centroid.
  std::vector<std::vector<int>> coverage;
  LocalProjection projection;
  double area_km2{0.0};  // area of the sampling window including the guard band
  long frame{0};
};

/// p_off = 1 - exp(-T_F/eps), p_on = 1 - exp(-T_F/beta), pi_on = p_on/(p_on+p_off).
DtmcProbs dtmc_probs(const RainParams& params, double frame_s);

/// Poisson number of rain cells over the guarded region, uniform centres,
/// exponential radius and rate marks, initial state ~ Bernoulli(pi_on).
RainField init_field(const ground::CellGrid& grid, const RainParams& params, double frame_s,
                     std::uint64_t seed);

/// Rebuilds the coverage sets against the grid's cell centroids.
void build_coverage(RainField& field, const ground::CellGrid& grid);

/// One DTMC transition for every rain cell; marks and centres persist.
void step(RainField& field, const DtmcProbs& probs, Rng& rng);

/// Sum of the rates of active rain cells covering user cell `cell`.
double rain_rate(const RainField& field, int cell);

/// Wet path length d~ = min(slant range, h_r / sin(elevation)), km.
double wet_path_km(double elevation_deg, double rain_height_km, double slant_range_km);

/// mu * rate^omega * d~ in dB; 0 when rate == 0.
double rain_attenuation_db(const orbit::PowerLaw& law, double elevation_deg, double rate_mmh,
                           double rain_height_km, double slant_range_km);

/// Same, taking the coefficients from the shell; throws std::invalid_argument
/// when the shell carries none.
double rain_attenuation_db(const orbit::ShellConfig& shell, double elevation_deg, double rate_mmh,
                           double rain_height_km, double slant_range_km);

/// Rate that produces `attenuation_db` over `path_km`: (A/(mu d~))^(1/omega).
double invert_power_law(double attenuation_db, const orbit::PowerLaw& law, double path_km);

}  // namespace leo::rain
