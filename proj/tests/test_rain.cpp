#include <cmath>

#include "doctest.h"
#include "leo/rain.hpp"

using namespace leo;

TEST_SUITE("rain") {
  TEST_CASE("steady state of the activity chain") {
    rain::RainParams p;
    const auto d = rain::dtmc_probs(p, 10.0);
    CHECK(d.p_on == doctest::Approx(5.167e-4).epsilon(1e-3));
    CHECK(d.p_off == doctest::Approx(1.472e-3).epsilon(1e-3));
    CHECK(std::abs(d.pi_on - 0.26) <= 0.005);

    const auto small = rain::dtmc_probs(p, 1e-3);
    CHECK(small.pi_on == doctest::Approx(1.886 / (1.886 + 5.376)).epsilon(1e-4));

    p.mean_active_h = p.mean_inactive_h = 3.0;
    CHECK(rain::dtmc_probs(p, 10.0).pi_on == doctest::Approx(0.5).epsilon(1e-15));
  }

  TEST_CASE("field size follows the intensity") {
    const auto grid = ground::build_grid({45.0, 49.0, 8.0, 13.0, 0.25});
    rain::RainParams p;
    double total = 0.0, area = 0.0;
    const int n = 40;
    for (int s = 0; s < n; ++s) {
      const auto f = rain::init_field(grid, p, 10.0, 100 + s);
      total += static_cast<double>(f.cells.size());
      area = f.area_km2;
    }
    const double expected = p.intensity_per_km2 * area;
    CHECK(std::abs(total / n - expected) < 5.0 * std::sqrt(expected / n));

    const auto a = rain::init_field(grid, p, 10.0, 3);
    const auto b = rain::init_field(grid, p, 10.0, 3);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
      CHECK(a.cells[i].x_km == b.cells[i].x_km);
      CHECK(a.cells[i].active == b.cells[i].active);
    }
  }

  TEST_CASE("transitions") {
    rain::RainField f;
    f.cells.resize(50);
    for (auto& c : f.cells) c.active = true;
    Rng rng(1);
    rain::step(f, {0.0, 1.0, 0.0}, rng);
    for (const auto& c : f.cells) CHECK_FALSE(c.active);

    rain::RainParams p;
    const auto probs = rain::dtmc_probs(p, 3600.0);
    rain::RainField one;
    one.cells.resize(1);
    long on = 0;
    const long steps = 100000;
    for (long k = 0; k < steps; ++k) {
      rain::step(one, probs, rng);
      on += one.cells[0].active ? 1 : 0;
    }
    CHECK(std::abs(static_cast<double>(on) / steps - probs.pi_on) < 0.01);
  }

  TEST_CASE("rate aggregation") {
    rain::RainField f;
    f.cells = {{0, 0, 10, 3.0, true}, {0, 0, 10, 4.5, true}, {0, 0, 10, 9.0, false}};
    f.coverage = {{}, {0, 1}, {2}};
    CHECK(rain::rain_rate(f, 0) == 0.0);
    CHECK(rain::rain_rate(f, 1) == doctest::Approx(7.5));
    CHECK(rain::rain_rate(f, 2) == 0.0);
  }

  TEST_CASE("power law attenuation and its inverse") {
    const orbit::PowerLaw law{0.075, 1.1};
    const double elev = rad2deg(std::asin(6.0 / 8.0));
    CHECK(rain::wet_path_km(elev, 6.0, 1000.0) == doctest::Approx(8.0));
    CHECK(rain::wet_path_km(elev, 6.0, 5.0) == doctest::Approx(5.0));
    CHECK(rain::rain_attenuation_db(law, elev, 0.0, 6.0, 1000.0) == 0.0);
    const double a = rain::rain_attenuation_db(law, elev, 10.0, 6.0, 1000.0);
    CHECK(a == doctest::Approx(7.553).epsilon(1e-3));
    CHECK(rain::invert_power_law(a, law, 8.0) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(rain::invert_power_law(0.0, law, 8.0) == 0.0);

    orbit::ShellConfig s;
    CHECK_THROWS_AS(rain::rain_attenuation_db(s, elev, 10.0, 6.0, 1000.0), std::invalid_argument);
  }
}
