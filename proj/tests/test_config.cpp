#include <fstream>
#include <iterator>
#include <string>

#include "doctest.h"
#include "leo/config.hpp"

using namespace leo;

namespace {
const std::string kDesk = std::string(LEO_PRESET_DIR) + "/desk_small.yaml";
const std::string kFull = std::string(LEO_PRESET_DIR) + "/table2_full.yaml";
}  // namespace

TEST_SUITE("config") {
  TEST_CASE("presets load and validate") {
    for (const auto& path : {kDesk, kFull}) {
      const auto s = config::load_file(path);
      CHECK_NOTHROW(s.validate());
      REQUIRE(s.constellation.shells.size() == 2);
      CHECK_FALSE(s.constellation.shells[0].rain.has_value());
      CHECK(s.constellation.shells[1].rain.has_value());
      CHECK(s.constellation.shells[1].carrier_hz == doctest::Approx(19.95e9));
      CHECK(s.frame.handover_s == doctest::Approx(0.05));
    }
    const auto full = config::load_file(kFull);
    CHECK(full.beams == 19);
    CHECK(full.seed == 2024);
  }

  TEST_CASE("digest is stable and sensitive") {
    const auto a = config::load_file(kDesk);
    std::ifstream f(kDesk);
    const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    const auto b = config::load_string(text + "\n# trailing comment\n");
    CHECK(config::digest(a) == config::digest(b));
    CHECK(config::canonical_yaml(a) == config::canonical_yaml(b));
    CHECK(config::digest(a).size() == 16);
    auto c = a;
    c.seed += 1;
    CHECK(config::digest(a) != config::digest(c));
  }

  TEST_CASE("malformed input is rejected") {
    std::ifstream f(kDesk);
    const std::string base((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    CHECK_NOTHROW(config::load_string(base));
    CHECK_THROWS(config::load_string(base + "\nbogus_key: 3\n"));
    CHECK_THROWS(config::load_string("name: x\nframes: -2\n"));
    auto s = config::load_file(kDesk);
    s.solver.tau = 0.0;
    CHECK_THROWS(s.validate());
    s = config::load_file(kDesk);
    s.frame.handover_s = 0.055;
    CHECK_THROWS(s.validate());
  }

  TEST_CASE("enum parsing") {
    CHECK(config::parse_realization("capped") == config::Realization::kCapped);
    CHECK(config::to_string(config::Realization::kOutage) == "outage");
    CHECK(config::parse_framework("dmrab") == config::Framework::kDmrab);
    CHECK_THROWS(config::parse_framework("greedy"));
  }
}
