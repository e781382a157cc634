#include <cmath>

#include "doctest.h"
#include "leo/link.hpp"

using namespace leo;

namespace {

orbit::ShellConfig ka() {
  orbit::ShellConfig s;
  s.id = "Ka";
  s.altitude_m = 550e3;
  s.carrier_hz = 19.95e9;
  s.bandwidth_hz = 500e6;
  s.antenna_gain_dbi = 30.5;
  s.tx_power_w = 75.0;
  s.min_elevation_deg = 25.0;
  s.rain = orbit::PowerLaw{0.0939, 1.0197};
  return s;
}

orbit::ShellConfig sband() {
  orbit::ShellConfig s;
  s.id = "S";
  s.altitude_m = 570e3;
  s.carrier_hz = 2.185e9;
  s.bandwidth_hz = 30e6;
  s.antenna_gain_dbi = 24.0;
  s.tx_power_w = 75.0;
  s.min_elevation_deg = 25.0;
  return s;
}

}  // namespace

TEST_SUITE("link") {
  TEST_CASE("free-space path loss") {
    CHECK(std::abs(link::path_loss_db(1000e3, 19.95e9) - 178.45) < 0.01);
    CHECK(std::abs(link::path_loss_db(1123.25e3, 2.185e9) - 160.25) < 0.01);
    CHECK(link::linear_to_db(link::path_loss(1000e3, 19.95e9)) ==
          doctest::Approx(link::path_loss_db(1000e3, 19.95e9)));
  }

  TEST_CASE("snr chain") {
    link::NoiseModel n;
    CHECK(std::abs(link::snr_db(ka(), 1000e3, 0.0, n) - (-10.2)) < 0.1);
    CHECK(std::abs(link::snr_db(sband(), 1123.25e3, 0.0, n) - 13.7) < 0.1);
    const double one = link::snr(ka(), 1000e3, 1.0, n);
    CHECK(link::snr(ka(), 1000e3, 2.0, n) == doctest::Approx(one / 2.0).epsilon(1e-14));
    CHECK(n.noise_power_dbm(500e6) == doctest::Approx(-176.31 + 10 * std::log10(500e6)));
  }

  TEST_CASE("achievable rate") {
    CHECK(link::achievable_rate(0.0, 30e6, 1e6, 2e6) == 0.0);
    CHECK(link::achievable_rate(10.0, 30e6, 2.1e6, 2e6) == 0.0);
    const double g = link::db_to_linear(13.7);
    CHECK(link::achievable_rate(g, 30e6, 1e6, 2e6) == doctest::Approx(138.3e6).epsilon(0.01));
  }

  TEST_CASE("link table applies rain to the Ka shell only") {
    orbit::Constellation c;
    c.shells = {sband(), ka()};
    auto grid = ground::build_grid({47.0, 47.5, 8.0, 8.5, 0.25});
    std::vector<int> cells{0, 1, 2, 3};
    std::vector<orbit::SatelliteState> now(2), next(2);
    for (int i = 0; i < 2; ++i) {
      now[i].sat_id = next[i].sat_id = i;
      now[i].shell = next[i].shell = i;
      const double alt = c.shells[static_cast<std::size_t>(i)].altitude_m;
      now[i].position = next[i].position =
          geo::surface_point(47.25, 8.25).normalized() * (GeometryConstants::kEarthRadius + alt);
    }
    rain::RainField field;
    field.cells = {{0, 0, 50, 10.0, true}};
    field.coverage = {{0}, {}, {}, {}};

    link::LinkContext ctx{&c, &grid, &field, 6.0, {}};
    const auto t = link::build_link_table(ctx, now, next, {0, 1}, cells);
    REQUIRE(t.links.size() == 8);
    for (const auto& l : t.links) {
      CHECK(l.in_range);
      CHECK(l.rate_bps > 0.0);
      if (l.shell == 1 && l.cell == 0) {
        CHECK(l.attenuation_db > 0.0);
        CHECK(l.snr < l.clear_sky_snr);
      } else {
        CHECK(l.attenuation_db == 0.0);
        CHECK(l.snr == doctest::Approx(l.clear_sky_snr));
      }
    }
    CHECK(t.links[0].sat_id == 0);
    CHECK(t.links[7].sat_id == 1);

    link::LinkContext clear{&c, &grid, nullptr, 6.0, {}};
    for (const auto& l : link::build_link_table(clear, now, next, {0, 1}, cells).links)
      CHECK(l.attenuation_db == 0.0);
  }
}
