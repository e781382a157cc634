#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "leo/link.hpp"
#include "leo/random.hpp"
#include "leo/simd/kernels.hpp"

namespace leo::sense {

enum class CsiMode { kPerfect, kSensed, kNone };
CsiMode parse_csi_mode(std::string_view s);
std::string_view to_string(CsiMode m);

/// How pilot observations are generated in the sensed mode. kSymbols draws
/// every received symbol; kStatistics draws the two sufficient statistics
/// from their exact joint law (same distribution, O(1) per pair).
enum class PilotSampler { kSymbols, kStatistics };
PilotSampler parse_pilot_sampler(std::string_view s);

struct PilotConfig {
  int pilot_len{256};
  int feedback_len{64};
  PilotSampler sampler{PilotSampler::kSymbols};
  void validate() const;
};

/// Complex symbol block in split real/imaginary storage.
struct SymbolBlock {
  std::vector<double> re;
  std::vector<double> im;
  std::size_t size() const { return re.size(); }
};

/// Unit-modulus binary (+-1) pilot sequence of length `len`.
SymbolBlock make_pilots(int len, Rng& rng);

/// y_i = m_i sqrt(snr) + z_i with z_i circular complex Gaussian, E|z|^2 = 1.
SymbolBlock simulate_pilot_rx(double snr, const SymbolBlock& pilots, Rng& rng);

/// Draws (sum Re{y* m}, sum |y|^2) for a unit-modulus pilot of length `len`
/// directly from their joint distribution.
simd::PilotStats sample_pilot_stats(double snr, int len, Rng& rng);

struct SnrEstimate {
  double snr{0.0};
  bool valid{true};
};

inline constexpr double kSnrCap = 1e9;
inline constexpr double kDenominatorGuard = 1e-12;

/// Closed-form data-aided estimator
///   (L - 3/2) (S/L)^2 / (E - S^2/L),  S = sum Re{y* m},  E = sum |y|^2.
/// A denominator at or below kDenominatorGuard * E yields {kSnrCap, false}.
SnrEstimate mle_snr(const SymbolBlock& y, const SymbolBlock& pilots);
SnrEstimate mle_snr_from_stats(const simd::PilotStats& stats, int len);

/// Variance bound 3 snr / L.
double crb(double snr, int pilot_len);

struct AttenuationEstimate {
  double attenuation{0.0};
  bool valid{true};
};

/// A^ = snr0 / snr^.
AttenuationEstimate attenuation_naive(const SnrEstimate& est, double clear_sky_snr);
/// A^^ = snr0 / (snr^ + 3/L).
double attenuation_corrected(double snr_hat, double clear_sky_snr, int pilot_len);

struct SensingTiming {
  double pilot_s{0.0};     // T_p
  double feedback_s{0.0};  // T_fb
  double total_s{0.0};     // T_S
  int frames{0};           // N_S
};

/// Sensing sub-frame lengths quantized to OFDMA frames of length `ofdma_s`.
SensingTiming sensing_timing(int cells_sensed, int beams, int pilot_len, int feedback_len,
                             double bandwidth_hz, double max_prop_s, double ofdma_s);

struct SensingReport {
  int sat_id{0};
  int cell{0};
  long frame{0};
  double snr_hat{0.0};  // what the decision maker believes
  double att_hat{1.0};  // corrected attenuation estimate (linear)
  bool valid{true};
  bool sensed{false};   // pilots were actually simulated for this pair
};

/// One report per link of `table`, in the same order.
std::vector<SensingReport> run_sensing_phase(const link::LinkTable& table,
                                             const orbit::Constellation& constellation,
                                             CsiMode mode, const PilotConfig& pilot,
                                             std::uint64_t seed);

}  // namespace leo::sense
