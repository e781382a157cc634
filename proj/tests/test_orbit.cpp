#include <cmath>

#include "doctest.h"
#include "leo/constants.hpp"
#include "leo/ground.hpp"
#include "leo/orbit.hpp"

using namespace leo;

namespace {

orbit::ShellConfig shell(double alt_km, double inc_deg, int planes, int per_plane) {
  orbit::ShellConfig s;
  s.id = "t";
  s.altitude_m = alt_km * 1e3;
  s.inclination_deg = inc_deg;
  s.plane_count = planes;
  s.sats_per_plane = per_plane;
  return s;
}

}  // namespace

TEST_SUITE("orbit") {
  TEST_CASE("orbital velocity") {
    CHECK(orbit::orbital_velocity(550e3) == doctest::Approx(7589.0).epsilon(1.0 / 7589.0));
    CHECK(orbit::orbital_velocity(0.0) == doctest::Approx(7910.0).epsilon(1.0 / 7910.0));
    // Ten seconds of flight at 550 km covers about 75.9 km.
    CHECK(orbit::orbital_velocity(550e3) * 10.0 == doctest::Approx(75.9e3).epsilon(0.002));
  }

  TEST_CASE("slant range") {
    CHECK(orbit::slant_range_max(550e3, 90.0) == doctest::Approx(550e3).epsilon(1e-12));
    CHECK(std::abs(orbit::slant_range_max(550e3, 25.0) - 1123.25e3) < 100.0);
    CHECK(std::abs(orbit::slant_range_max(570e3, 25.0) - 1159.4e3) < 100.0);
  }

  TEST_CASE("max propagation time") {
    auto a = shell(550, 53, 1, 1), b = shell(570, 70, 1, 1);
    a.min_elevation_deg = b.min_elevation_deg = 25.0;
    CHECK(std::abs(orbit::max_propagation_time({a, b}) - 3.867e-3) < 1e-6);
    CHECK(orbit::max_propagation_time({a}, 90.0) ==
          doctest::Approx(550e3 / GeometryConstants::kSpeedOfLight));
  }

  TEST_CASE("initial phasing") {
    orbit::Constellation c;
    c.shells = {shell(550, 53, 4, 5)};
    const auto st = orbit::propagate(c, 0, 10.0);
    REQUIRE(st.size() == 20);
    for (const auto& s : st) {
      CHECK(s.raan_rad == doctest::Approx(2 * kPi * s.plane / 4));
      CHECK(s.arg_latitude_rad == doctest::Approx(2 * kPi * s.slot / 5));
      CHECK(s.position.norm() ==
            doctest::Approx(GeometryConstants::kEarthRadius + 550e3).epsilon(1e-12));
    }
    CHECK(st[7].sat_id == 7);
  }

  TEST_CASE("one period returns to the initial anomaly") {
    orbit::Constellation c;
    c.shells = {shell(550, 53, 2, 3)};
    const double period = orbit::orbital_period(550e3);
    const auto a = orbit::propagate(c, 0, period);
    const auto b = orbit::propagate(c, 1, period);
    for (std::size_t i = 0; i < a.size(); ++i) {
      double d = std::abs(a[i].arg_latitude_rad - b[i].arg_latitude_rad);
      d = std::min(d, 2 * kPi - d);
      CHECK(d < 1e-6);
    }
  }

  TEST_CASE("negative frame index is rejected") {
    orbit::Constellation c;
    c.shells = {shell(550, 53, 1, 1)};
    CHECK_THROWS_AS(orbit::propagate(c, -1, 10.0), std::invalid_argument);
  }

  TEST_CASE("cell distance uses the farthest sample") {
    ground::Region r{47.0, 48.0, 8.0, 9.0, 1.0};
    const auto grid = ground::build_grid(r);
    const auto& cell = grid.cells.at(0);
    orbit::SatelliteState sat;
    sat.position = cell.centroid_ecef.normalized() * (GeometryConstants::kEarthRadius + 550e3);
    const double d = orbit::cell_distance(sat, cell);
    CHECK(d > 550e3);
    CHECK(d == doctest::Approx(std::sqrt([&] {
                double m = 0;
                for (int i = 0; i < 4; ++i) {
                  geo::Vec3 p{cell.sample_x[i], cell.sample_y[i], cell.sample_z[i]};
                  m = std::max(m, (p - sat.position).squaredNorm());
                }
                return m;
              }())));

    // A zero-area cell collapses to its single point.
    ground::Cell dot = cell;
    for (int i = 0; i < 5; ++i) {
      dot.sample_x[i] = cell.centroid_ecef.x();
      dot.sample_y[i] = cell.centroid_ecef.y();
      dot.sample_z[i] = cell.centroid_ecef.z();
    }
    CHECK(orbit::cell_distance(sat, dot) == doctest::Approx(550e3).epsilon(1e-9));
  }

  TEST_CASE("visibility") {
    ground::Region r{47.0, 48.0, 8.0, 9.0, 0.25};
    auto grid = ground::build_grid(r);
    std::vector<int> cells;
    for (const auto& c : grid.cells) cells.push_back(c.id);

    orbit::Constellation empty;
    CHECK(orbit::visible_satellites(empty, {}, {}, grid, cells).empty());

    // A hand-placed satellite above the region centre is in view at both
    // frames; one that drifts far away by k+1 is not.
    orbit::Constellation c;
    c.shells = {shell(550, 53, 1, 2)};
    c.shells[0].min_elevation_deg = 25.0;
    const geo::Vec3 up = geo::surface_point(47.5, 8.5).normalized() *
                         (GeometryConstants::kEarthRadius + 550e3);
    const geo::Vec3 far = geo::surface_point(20.0, 60.0).normalized() *
                          (GeometryConstants::kEarthRadius + 550e3);
    std::vector<orbit::SatelliteState> now(2), next(2);
    for (int i = 0; i < 2; ++i) now[i].sat_id = next[i].sat_id = i;
    now[0].position = next[0].position = up;
    now[1].position = up;
    next[1].position = far;
    const auto vis = orbit::visible_satellites(c, now, next, grid, cells);
    REQUIRE(vis.size() == 1);
    CHECK(vis[0] == 0);
  }

  TEST_CASE("invalid shells") {
    auto s = shell(550, 53, 0, 1);
    CHECK_THROWS(s.validate());
    auto ok = shell(550, 53, 1, 1);
    CHECK_NOTHROW(ok.validate());
    CHECK(ok.sensing_capable());
    ok.carrier_hz = 2.185e9;
    CHECK_FALSE(ok.sensing_capable());
  }
}
