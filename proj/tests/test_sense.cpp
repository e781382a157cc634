#include <cmath>
#include <vector>

#include "doctest.h"
#include "leo/sense.hpp"

using namespace leo;

namespace {

struct Moments {
  double mean{0.0};
  double var{0.0};
};

Moments mc_estimates(double snr, int len, int trials, sense::PilotSampler sampler,
                     std::uint64_t seed) {
  Rng rng(seed);
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < trials; ++i) {
    sense::SnrEstimate e;
    if (sampler == sense::PilotSampler::kStatistics) {
      e = sense::mle_snr_from_stats(sense::sample_pilot_stats(snr, len, rng), len);
    } else {
      const auto m = sense::make_pilots(len, rng);
      e = sense::mle_snr(sense::simulate_pilot_rx(snr, m, rng), m);
    }
    s1 += e.snr;
    s2 += e.snr * e.snr;
  }
  Moments m;
  m.mean = s1 / trials;
  m.var = s2 / trials - m.mean * m.mean;
  return m;
}

}  // namespace

TEST_SUITE("sense") {
  TEST_CASE("mode parsing") {
    CHECK(sense::parse_csi_mode("sensed") == sense::CsiMode::kSensed);
    CHECK(sense::to_string(sense::CsiMode::kNone) == "none");
    CHECK_THROWS(sense::parse_csi_mode("psychic"));
    CHECK(sense::parse_pilot_sampler("statistics") == sense::PilotSampler::kStatistics);
  }

  TEST_CASE("pilots are unit modulus and reproducible") {
    Rng a(4), b(4);
    const auto p = sense::make_pilots(64, a);
    const auto q = sense::make_pilots(64, b);
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(p.re[i] * p.re[i] + p.im[i] * p.im[i] == doctest::Approx(1.0));
      CHECK(p.re[i] == q.re[i]);
    }
  }

  TEST_CASE("pure noise correlates to zero") {
    Rng rng(5);
    const auto m = sense::make_pilots(1 << 16, rng);
    const auto y = sense::simulate_pilot_rx(0.0, m, rng);
    const auto s = simd::pilot_stats(y.re, y.im, m.re, m.im);
    const double L = static_cast<double>(m.size());
    CHECK(std::abs(s.sum_re_ym / L) < 5.0 / std::sqrt(L));
    CHECK(s.sum_abs2 / L == doctest::Approx(1.0).epsilon(0.02));
  }

  TEST_CASE("noise-free input trips the guard") {
    Rng rng(6);
    const auto m = sense::make_pilots(32, rng);
    sense::SymbolBlock y = m;
    for (auto& v : y.re) v *= 3.0;
    for (auto& v : y.im) v *= 3.0;
    const auto e = sense::mle_snr(y, m);
    CHECK_FALSE(e.valid);
    CHECK(e.snr == sense::kSnrCap);
    const auto a = sense::attenuation_naive(e, 100.0);
    CHECK_FALSE(a.valid);
  }

  TEST_CASE("estimator is nearly unbiased") {
    const auto m = mc_estimates(10.0, 1024, 4000, sense::PilotSampler::kSymbols, 7);
    CHECK(std::abs(m.mean - 10.0) / 10.0 <= 0.02);
  }

  TEST_CASE("the statistics sampler matches the symbol sampler in law") {
    const auto a = mc_estimates(4.0, 64, 20000, sense::PilotSampler::kSymbols, 8);
    const auto b = mc_estimates(4.0, 64, 20000, sense::PilotSampler::kStatistics, 9);
    CHECK(a.mean == doctest::Approx(b.mean).epsilon(0.01));
    CHECK(a.var == doctest::Approx(b.var).epsilon(0.06));
  }

  TEST_CASE("bound and attenuation formulas") {
    CHECK(sense::crb(10.0, 1024) == doctest::Approx(0.029297).epsilon(1e-5));
    CHECK(sense::crb(0.0, 1024) == 0.0);
    CHECK(sense::attenuation_naive({100.0, true}, 100.0).attenuation == doctest::Approx(1.0));
    CHECK(sense::attenuation_naive({50.0, true}, 100.0).attenuation == doctest::Approx(2.0));
    CHECK(sense::attenuation_corrected(50.0, 100.0, 4096) ==
          doctest::Approx(100.0 / (50.0 + 3.0 / 4096)).epsilon(1e-15));
    CHECK(sense::attenuation_corrected(50.0, 100.0, 4096) == doctest::Approx(1.99997).epsilon(1e-6));
    CHECK(sense::attenuation_corrected(50.0, 100.0, 1 << 30) == doctest::Approx(2.0).epsilon(1e-8));
  }

  TEST_CASE("sensing sub-frame timing") {
    // Up to about 227 thousand cells fit in one 10 ms pilot slot at 2^8 symbols.
    for (int cs : {1, 19, 1900, 190000}) {
      const auto t = sense::sensing_timing(cs, 19, 256, 256, 500e6, 3.867e-3, 0.01);
      CHECK(t.pilot_s == doctest::Approx(0.01));
      CHECK(t.feedback_s == doctest::Approx(0.01));
      CHECK(t.total_s == doctest::Approx(0.02));
      CHECK(t.frames == 2);
    }
    CHECK(sense::sensing_timing(1, 19, 4, 4, 500e6, 10.001e-3, 0.01).pilot_s ==
          doctest::Approx(0.02));
    double prev = 0.0;
    for (int e = 2; e <= 16; ++e) {
      const double ts = sense::sensing_timing(6161, 19, 1 << e, 64, 500e6, 3.867e-3, 0.01).total_s;
      CHECK(ts >= prev);
      prev = ts;
    }
    CHECK_THROWS(sense::sensing_timing(0, 19, 256, 256, 500e6, 3.867e-3, 0.01));
  }

  TEST_CASE("sensing phase per mode") {
    orbit::ShellConfig s;
    s.id = "S";
    s.carrier_hz = 2.185e9;
    orbit::ShellConfig k;
    k.id = "Ka";
    k.carrier_hz = 19.95e9;
    k.rain = orbit::PowerLaw{0.0939, 1.0197};
    orbit::Constellation c;
    c.shells = {s, k};

    link::LinkTable t;
    for (int shell = 0; shell < 2; ++shell) {
      link::LinkState l;
      l.sat_id = shell;
      l.shell = shell;
      l.cell = 3;
      l.clear_sky_snr = 20.0;
      l.attenuation_db = shell == 1 ? 3.0 : 0.0;
      l.snr = l.clear_sky_snr / l.attenuation();
      t.links.push_back(l);
    }
    sense::PilotConfig p;
    p.pilot_len = 4096;

    const auto perfect = sense::run_sensing_phase(t, c, sense::CsiMode::kPerfect, p, 1);
    for (std::size_t i = 0; i < 2; ++i) CHECK(perfect[i].snr_hat == t.links[i].snr);

    const auto none = sense::run_sensing_phase(t, c, sense::CsiMode::kNone, p, 1);
    CHECK(none[1].snr_hat / t.links[1].snr == doctest::Approx(t.links[1].attenuation()));
    CHECK(none[1].att_hat == 1.0);

    const auto sensed = sense::run_sensing_phase(t, c, sense::CsiMode::kSensed, p, 1);
    CHECK_FALSE(sensed[0].sensed);
    CHECK(sensed[0].snr_hat == t.links[0].clear_sky_snr);
    CHECK(sensed[1].sensed);
    CHECK(sensed[1].snr_hat == doctest::Approx(t.links[1].snr).epsilon(0.1));
    CHECK(sensed[1].att_hat == doctest::Approx(t.links[1].attenuation()).epsilon(0.1));
    const auto again = sense::run_sensing_phase(t, c, sense::CsiMode::kSensed, p, 1);
    CHECK(again[1].snr_hat == sensed[1].snr_hat);
  }

  TEST_CASE("NMSE shrinks with pilot length") {
    auto nmse = [](int len) {
      Rng rng(21);
      double num = 0.0;
      const double g = 2.0;
      for (int i = 0; i < 3000; ++i) {
        const auto e = sense::mle_snr_from_stats(sense::sample_pilot_stats(g, len, rng), len);
        num += (e.snr - g) * (e.snr - g);
      }
      return num / (3000 * g * g);
    };
    CHECK(nmse(1 << 12) < nmse(1 << 8));
    CHECK(nmse(1 << 8) < nmse(1 << 4));
  }
}
