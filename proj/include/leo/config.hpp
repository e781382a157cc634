#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "leo/alloc.hpp"
#include "leo/ground.hpp"
#include "leo/link.hpp"
#include "leo/orbit.hpp"
#include "leo/rain.hpp"
#include "leo/sense.hpp"

namespace leo::config {

struct PopulationSpec {
  std::string source{"synthetic"};  // "synthetic" or "file"
  std::string file;                 // lat,lon,count CSV when source == file
  double mean{80000.0};
  double dispersion{1.0};
  double zero_fraction{0.1243};
};

struct FrameSpec {
  double ofdma_s{0.01};
  double frame_s{10.0};
  double handover_s{0.05};
  int n_rtt{2};
  double ra_routing_in_s{0.0};
  double ra_routing_out_s{0.0};
};

enum class Realization { kOutage, kCapped };
Realization parse_realization(const std::string& s);
std::string to_string(Realization r);

enum class Framework { kJmra, kDmrab };
Framework parse_framework(const std::string& s);
std::string to_string(Framework f);

struct HarnessSpec {
  std::vector<Framework> frameworks{Framework::kJmra};
  std::vector<sense::CsiMode> csi{sense::CsiMode::kSensed};
  Realization realization{Realization::kOutage};
  /// Write measured solver wall time into kpis.csv. Off by default so that
  /// the KPI file is a pure function of config and seed; the timing always
  /// goes to telemetry.csv and the manifest.
  bool wall_time_in_kpis{false};
};

struct Scenario {
  std::string name{"scenario"};
  std::uint64_t seed{1};
  int frames{10};
  orbit::Constellation constellation;
  int beams{19};
  ground::Region region;
  double active_fraction{0.001};
  PopulationSpec population;
  link::NoiseModel noise;
  bool rain_enabled{true};
  rain::RainParams rain;
  FrameSpec frame;
  sense::PilotConfig pilot;
  alloc::SolverParams solver;
  HarnessSpec harness;

  /// Throws std::invalid_argument describing the first problem found.
  void validate() const;
};

Scenario load_file(const std::string& path);
Scenario load_string(const std::string& yaml_text);

/// Canonical YAML rendering of the parsed scenario (every field, fixed order,
/// SI units). It feeds the digest and is not an input document.
std::string canonical_yaml(const Scenario& s);
/// FNV-1a 64 of the canonical rendering, as 16 hex digits.
std::string digest(const Scenario& s);

}  // namespace leo::config
