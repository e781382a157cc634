#include "leo/sense.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace leo::sense {

CsiMode parse_csi_mode(std::string_view s) {
  if (s == "perfect") return CsiMode::kPerfect;
  if (s == "sensed") return CsiMode::kSensed;
  if (s == "none") return CsiMode::kNone;
  throw std::invalid_argument("unknown csi mode: " + std::string(s));
}

std::string_view to_string(CsiMode m) {
  switch (m) {
    case CsiMode::kPerfect: return "perfect";
    case CsiMode::kSensed: return "sensed";
    case CsiMode::kNone: return "none";
  }
  return "?";
}

PilotSampler parse_pilot_sampler(std::string_view s) {
  if (s == "symbols") return PilotSampler::kSymbols;
  if (s == "statistics") return PilotSampler::kStatistics;
  throw std::invalid_argument("unknown pilot sampler: " + std::string(s));
}

void PilotConfig::validate() const {
  if (pilot_len < 4) throw std::invalid_argument("pilot length must be at least 4");
  if (feedback_len < 1) throw std::invalid_argument("feedback length must be positive");
}

SymbolBlock make_pilots(int len, Rng& rng) {
  SymbolBlock m;
  m.re.resize(static_cast<std::size_t>(len));
  m.im.assign(static_cast<std::size_t>(len), 0.0);
  std::bernoulli_distribution bit(0.5);
  for (auto& v : m.re) v = bit(rng) ? 1.0 : -1.0;
  return m;
}

SymbolBlock simulate_pilot_rx(double snr, const SymbolBlock& pilots, Rng& rng) {
  if (snr < 0.0) throw std::invalid_argument("snr must be nonnegative");
  const double amp = std::sqrt(snr);
  std::normal_distribution<double> noise(0.0, std::sqrt(0.5));
  SymbolBlock y;
  const std::size_t n = pilots.size();
  y.re.resize(n);
  y.im.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    y.re[i] = pilots.re[i] * amp + noise(rng);
    y.im[i] = pilots.im[i] * amp + noise(rng);
  }
  return y;
}

simd::PilotStats sample_pilot_stats(double snr, int len, Rng& rng) {
  // Rotating each symbol by conj(m_i) leaves the noise law unchanged, so the
  // in-phase sum is N(L sqrt(snr), L/2) and the energy left after projecting
  // it out is (1/2) chi^2 with 2L - 1 degrees of freedom.
  const double l = static_cast<double>(len);
  std::normal_distribution<double> in_phase(l * std::sqrt(snr), std::sqrt(0.5 * l));
  std::gamma_distribution<double> residual(l - 0.5, 1.0);
  simd::PilotStats st;
  st.sum_re_ym = in_phase(rng);
  st.sum_abs2 = st.sum_re_ym * st.sum_re_ym / l + residual(rng);
  return st;
}

SnrEstimate mle_snr_from_stats(const simd::PilotStats& stats, int len) {
  const double l = static_cast<double>(len);
  const double den = stats.sum_abs2 - stats.sum_re_ym * stats.sum_re_ym / l;
  if (!(den > kDenominatorGuard * stats.sum_abs2)) return {kSnrCap, false};
  const double mean = stats.sum_re_ym / l;
  const double est = (l - 1.5) * mean * mean / den;
  if (!(est < kSnrCap)) return {kSnrCap, false};
  return {est, true};
}

SnrEstimate mle_snr(const SymbolBlock& y, const SymbolBlock& pilots) {
  if (y.size() != pilots.size() || y.size() == 0)
    throw std::invalid_argument("received block and pilots must have equal nonzero length");
  const auto stats = simd::pilot_stats(y.re, y.im, pilots.re, pilots.im);
  return mle_snr_from_stats(stats, static_cast<int>(y.size()));
}

double crb(double snr, int pilot_len) {
  if (pilot_len <= 0) throw std::invalid_argument("pilot length must be positive");
  return 3.0 * snr / pilot_len;
}

AttenuationEstimate attenuation_naive(const SnrEstimate& est, double clear_sky_snr) {
  if (!est.valid || !(est.snr > 0.0)) return {0.0, false};
  return {clear_sky_snr / est.snr, true};
}

double attenuation_corrected(double snr_hat, double clear_sky_snr, int pilot_len) {
  if (snr_hat < 0.0) throw std::invalid_argument("snr estimate must be nonnegative");
  return clear_sky_snr / (snr_hat + 3.0 / pilot_len);
}

namespace {

int ceil_frames(double seconds, double ofdma_s) {
  // Tolerate representation error so that exact multiples do not round up.
  return static_cast<int>(std::ceil(seconds / ofdma_s - 1e-9));
}

}  // namespace

SensingTiming sensing_timing(int cells_sensed, int beams, int pilot_len, int feedback_len,
                             double bandwidth_hz, double max_prop_s, double ofdma_s) {
  if (cells_sensed <= 0 || beams <= 0 || pilot_len <= 0 || feedback_len <= 0 ||
      !(bandwidth_hz > 0.0) || max_prop_s < 0.0 || !(ofdma_s > 0.0))
    throw std::invalid_argument("sensing timing inputs must be positive");
  const double switches = std::ceil(static_cast<double>(cells_sensed) / beams);
  SensingTiming t;
  const int np = ceil_frames(max_prop_s + switches * pilot_len / bandwidth_hz, ofdma_s);
  const int nf = ceil_frames(switches * feedback_len / bandwidth_hz + max_prop_s, ofdma_s);
  t.pilot_s = np * ofdma_s;
  t.feedback_s = nf * ofdma_s;
  t.frames = np + nf;
  t.total_s = t.frames * ofdma_s;
  return t;
}

std::vector<SensingReport> run_sensing_phase(const link::LinkTable& table,
                                             const orbit::Constellation& constellation,
                                             CsiMode mode, const PilotConfig& pilot,
                                             std::uint64_t seed) {
  std::vector<SensingReport> out;
  out.reserve(table.links.size());
  for (const auto& ls : table.links) {
    SensingReport r;
    r.sat_id = ls.sat_id;
    r.cell = ls.cell;
    r.frame = ls.frame;
    const bool capable =
        constellation.shells[static_cast<std::size_t>(ls.shell)].sensing_capable();
    switch (mode) {
      case CsiMode::kPerfect:
        r.snr_hat = ls.snr;
        r.att_hat = ls.attenuation();
        break;
      case CsiMode::kNone:
        r.snr_hat = ls.clear_sky_snr;
        r.att_hat = 1.0;
        break;
      case CsiMode::kSensed:
        if (!capable) {
          r.snr_hat = ls.clear_sky_snr;
          r.att_hat = 1.0;
          break;
        }
        {
          Rng rng = make_rng(seed, "sense.pilot",
                             {static_cast<std::uint64_t>(ls.frame),
                              static_cast<std::uint64_t>(ls.sat_id),
                              static_cast<std::uint64_t>(ls.cell)});
          SnrEstimate est;
          if (pilot.sampler == PilotSampler::kStatistics) {
            est = mle_snr_from_stats(sample_pilot_stats(ls.snr, pilot.pilot_len, rng),
                                     pilot.pilot_len);
          } else {
            const SymbolBlock m = make_pilots(pilot.pilot_len, rng);
            est = mle_snr(simulate_pilot_rx(ls.snr, m, rng), m);
          }
          r.sensed = true;
          r.valid = est.valid;
          // A guarded estimate carries no information; fall back to clear sky.
          r.snr_hat = est.valid ? est.snr : ls.clear_sky_snr;
          r.att_hat = est.valid
                          ? attenuation_corrected(est.snr, ls.clear_sky_snr, pilot.pilot_len)
                          : 1.0;
        }
        break;
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace leo::sense
