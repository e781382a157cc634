#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "leo/alloc.hpp"
#include "leo/harness.hpp"

using namespace leo;

namespace {

config::Scenario small_scenario(int frames) {
  auto s = config::load_file(std::string(LEO_PRESET_DIR) + "/desk_small.yaml");
  s.frames = frames;
  s.region = {47.0, 48.0, 8.0, 9.0, 0.25};
  s.population.zero_fraction = 0.0;
  s.pilot.pilot_len = 256;
  s.harness.frameworks = {config::Framework::kJmra, config::Framework::kDmrab};
  s.harness.csi = {sense::CsiMode::kPerfect, sense::CsiMode::kSensed, sense::CsiMode::kNone};
  s.solver.n_iter = 10;
  return s;
}

std::string kpis_text(const harness::RunOutput& out) {
  std::ostringstream os;
  harness::write_kpis_csv(os, out.records, false);
  return os.str();
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("zero frames give an empty run with a manifest") {
    const auto out = harness::run_experiment(small_scenario(0));
    CHECK(out.records.empty());
    CHECK(out.manifest.contains("config_digest"));
    CHECK(out.manifest["summaries"].size() == 6);
  }

  TEST_CASE("small run is feasible, deterministic and well formed") {
    const auto sc = small_scenario(3);
    const auto a = harness::run_experiment(sc);
    const auto b = harness::run_experiment(sc);
    CHECK(kpis_text(a) == kpis_text(b));
    REQUIRE(a.records.size() == 3 * 6);
    for (const auto& t : a.telemetry) CHECK(t.feasible_p1);
    for (const auto& r : a.records) {
      CHECK(r.throughput_bps >= 0.0);
      CHECK(r.jain >= 0.0);
      CHECK(r.jain <= 1.0 + 1e-12);
      if (r.csi == "perfect" && !std::isnan(r.nmse_gamma)) CHECK(r.nmse_gamma == 0.0);
      if (r.csi == "sensed") CHECK(r.ts_s > 0.0);
      else CHECK(r.ts_s == 0.0);
    }
    CHECK(a.manifest["handover"]["lower_bound_s"].get<double>() == doctest::Approx(0.02));
    CHECK_FALSE(a.manifest["handover"]["warning"].get<bool>());
  }

  TEST_CASE("kpis.csv round trip") {
    const auto out = harness::run_experiment(small_scenario(1));
    std::istringstream in(kpis_text(out));
    const auto back = harness::read_kpis_csv(in);
    REQUIRE(back.size() == out.records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      CHECK(back[i].framework == out.records[i].framework);
      CHECK(back[i].throughput_bps == doctest::Approx(out.records[i].throughput_bps).epsilon(1e-11));
    }
  }

  TEST_CASE("handover below the bound is flagged") {
    auto sc = small_scenario(1);
    sc.frame.handover_s = 0.01;
    sc.harness.frameworks = {config::Framework::kDmrab};
    sc.harness.csi = {sense::CsiMode::kPerfect};
    const auto out = harness::run_experiment(sc);
    CHECK(out.manifest["handover"]["warning"].get<bool>());
  }
}
