#include "leo/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "leo/constants.hpp"
#include "leo/frame.hpp"
#include "leo/random.hpp"

namespace leo::config {

namespace {

void check_keys(const YAML::Node& node, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!node) return;
  if (!node.IsMap()) throw std::invalid_argument(where + ": expected a mapping");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!ok.count(key)) throw std::invalid_argument(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& out) {
  if (node && node[key]) {
    try {
      out = node[key].as<T>();
    } catch (const YAML::Exception& e) {
      throw std::invalid_argument(std::string("bad value for '") + key + "': " + e.what());
    }
  }
}

void read_scaled(const YAML::Node& node, const char* key, double scale, double& out) {
  if (node && node[key]) {
    double v = 0.0;
    read(node, key, v);
    out = v * scale;
  }
}

orbit::ShellConfig parse_shell(const YAML::Node& n, std::size_t index) {
  const std::string where = "constellation.shells[" + std::to_string(index) + "]";
  check_keys(n, where,
             {"id", "altitude_km", "inclination_deg", "planes", "sats_per_plane", "carrier_ghz",
              "bandwidth_mhz", "antenna_gain_dbi", "tx_power_w", "min_elevation_deg",
              "raan_offset_deg", "rain_coefficients"});
  orbit::ShellConfig s;
  read(n, "id", s.id);
  read_scaled(n, "altitude_km", 1e3, s.altitude_m);
  read(n, "inclination_deg", s.inclination_deg);
  read(n, "planes", s.plane_count);
  read(n, "sats_per_plane", s.sats_per_plane);
  read_scaled(n, "carrier_ghz", 1e9, s.carrier_hz);
  read_scaled(n, "bandwidth_mhz", 1e6, s.bandwidth_hz);
  read(n, "antenna_gain_dbi", s.antenna_gain_dbi);
  read(n, "tx_power_w", s.tx_power_w);
  read(n, "min_elevation_deg", s.min_elevation_deg);
  double raan_deg = 0.0;
  read(n, "raan_offset_deg", raan_deg);
  s.raan_offset_rad = deg2rad(raan_deg);
  if (const auto rc = n["rain_coefficients"]) {
    check_keys(rc, where + ".rain_coefficients", {"mu", "omega"});
    orbit::PowerLaw law;
    read(rc, "mu", law.mu);
    read(rc, "omega", law.omega);
    s.rain = law;
  }
  return s;
}

Scenario parse(const YAML::Node& root) {
  check_keys(root, "scenario",
             {"name", "seed", "frames", "constellation", "ground", "rain", "frame", "sensing",
              "solver", "harness"});
  Scenario sc;
  read(root, "name", sc.name);
  read(root, "seed", sc.seed);
  read(root, "frames", sc.frames);

  const auto con = root["constellation"];
  check_keys(con, "constellation", {"shells", "beams"});
  read(con, "beams", sc.beams);
  if (con && con["shells"]) {
    std::size_t i = 0;
    for (const auto& n : con["shells"]) sc.constellation.shells.push_back(parse_shell(n, i++));
  }

  const auto gr = root["ground"];
  check_keys(gr, "ground",
             {"region", "active_fraction", "population", "noise_density_dbm_hz",
              "user_gain_dbi", "pointing_loss_db"});
  if (gr) {
    const auto rg = gr["region"];
    check_keys(rg, "ground.region", {"lat_min", "lat_max", "lon_min", "lon_max", "cell_step_deg"});
    read(rg, "lat_min", sc.region.lat_min);
    read(rg, "lat_max", sc.region.lat_max);
    read(rg, "lon_min", sc.region.lon_min);
    read(rg, "lon_max", sc.region.lon_max);
    read(rg, "cell_step_deg", sc.region.cell_step_deg);
    read(gr, "active_fraction", sc.active_fraction);
    const auto pop = gr["population"];
    check_keys(pop, "ground.population", {"source", "file", "mean", "dispersion", "zero_fraction"});
    read(pop, "source", sc.population.source);
    read(pop, "file", sc.population.file);
    read(pop, "mean", sc.population.mean);
    read(pop, "dispersion", sc.population.dispersion);
    read(pop, "zero_fraction", sc.population.zero_fraction);
    read(gr, "noise_density_dbm_hz", sc.noise.n0_dbm_per_hz);
    read(gr, "user_gain_dbi", sc.noise.user_gain_dbi);
    read(gr, "pointing_loss_db", sc.noise.pointing_loss_db);
  }

  const auto rn = root["rain"];
  check_keys(rn, "rain",
             {"enabled", "intensity_per_km2", "height_km", "mean_rate_mmh", "mean_radius_km",
              "mean_duration_h", "mean_interarrival_h", "mark", "guard_factor"});
  read(rn, "enabled", sc.rain_enabled);
  read(rn, "intensity_per_km2", sc.rain.intensity_per_km2);
  read(rn, "height_km", sc.rain.rain_height_km);
  read(rn, "mean_rate_mmh", sc.rain.mean_rate_mmh);
  read(rn, "mean_radius_km", sc.rain.mean_radius_km);
  read(rn, "mean_duration_h", sc.rain.mean_active_h);
  read(rn, "mean_interarrival_h", sc.rain.mean_inactive_h);
  read(rn, "guard_factor", sc.rain.guard_factor);
  if (rn && rn["mark"]) {
    const auto mark = rn["mark"].as<std::string>();
    if (mark != "radius" && mark != "diameter")
      throw std::invalid_argument("rain.mark must be radius or diameter");
    sc.rain.mark_is_radius = mark == "radius";
  }

  const auto fr = root["frame"];
  check_keys(fr, "frame",
             {"ofdma_ms", "frame_s", "handover_ms", "n_rtt", "ra_routing_in_ms",
              "ra_routing_out_ms"});
  read_scaled(fr, "ofdma_ms", 1e-3, sc.frame.ofdma_s);
  read(fr, "frame_s", sc.frame.frame_s);
  read_scaled(fr, "handover_ms", 1e-3, sc.frame.handover_s);
  read(fr, "n_rtt", sc.frame.n_rtt);
  read_scaled(fr, "ra_routing_in_ms", 1e-3, sc.frame.ra_routing_in_s);
  read_scaled(fr, "ra_routing_out_ms", 1e-3, sc.frame.ra_routing_out_s);

  const auto se = root["sensing"];
  check_keys(se, "sensing", {"pilot_len", "feedback_len", "sampler"});
  read(se, "pilot_len", sc.pilot.pilot_len);
  read(se, "feedback_len", sc.pilot.feedback_len);
  if (se && se["sampler"]) sc.pilot.sampler = sense::parse_pilot_sampler(se["sampler"].as<std::string>());

  const auto so = root["solver"];
  check_keys(so, "solver", {"tau", "theta", "delta", "p_init", "n_iter", "gap_tol"});
  read(so, "tau", sc.solver.tau);
  read(so, "theta", sc.solver.theta);
  read(so, "delta", sc.solver.delta);
  read(so, "p_init", sc.solver.p_init);
  read(so, "n_iter", sc.solver.n_iter);
  read(so, "gap_tol", sc.solver.sub.gap_tol);

  const auto ha = root["harness"];
  check_keys(ha, "harness", {"frameworks", "csi", "realization", "wall_time_in_kpis"});
  if (ha && ha["frameworks"]) {
    sc.harness.frameworks.clear();
    for (const auto& f : ha["frameworks"]) sc.harness.frameworks.push_back(parse_framework(f.as<std::string>()));
  }
  if (ha && ha["csi"]) {
    sc.harness.csi.clear();
    for (const auto& m : ha["csi"]) sc.harness.csi.push_back(sense::parse_csi_mode(m.as<std::string>()));
  }
  if (ha && ha["realization"]) sc.harness.realization = parse_realization(ha["realization"].as<std::string>());
  read(ha, "wall_time_in_kpis", sc.harness.wall_time_in_kpis);
  return sc;
}

}  // namespace

Realization parse_realization(const std::string& s) {
  if (s == "outage") return Realization::kOutage;
  if (s == "capped") return Realization::kCapped;
  throw std::invalid_argument("unknown realization mode: " + s);
}

std::string to_string(Realization r) { return r == Realization::kOutage ? "outage" : "capped"; }

Framework parse_framework(const std::string& s) {
  if (s == "jmra") return Framework::kJmra;
  if (s == "dmrab") return Framework::kDmrab;
  throw std::invalid_argument("unknown framework: " + s);
}

std::string to_string(Framework f) { return f == Framework::kJmra ? "jmra" : "dmrab"; }

void Scenario::validate() const {
  if (frames < 0) throw std::invalid_argument("frames must be >= 0");
  if (constellation.shells.empty()) throw std::invalid_argument("at least one shell is required");
  std::set<std::string> ids;
  for (const auto& s : constellation.shells) {
    s.validate();
    if (!ids.insert(s.id).second) throw std::invalid_argument("duplicate shell id " + s.id);
    if (rain_enabled && s.sensing_capable() && !s.rain)
      throw std::invalid_argument("shell " + s.id + " needs rain_coefficients");
  }
  if (beams < 1) throw std::invalid_argument("beams must be >= 1");
  region.validate();
  if (!(active_fraction > 0.0) || active_fraction > 1.0)
    throw std::invalid_argument("active_fraction must be in (0, 1]");
  if (population.source == "file") {
    if (population.file.empty()) throw std::invalid_argument("population.file is required");
  } else if (population.source == "synthetic") {
    if (!(population.mean > 0.0) || population.dispersion < 0.0 ||
        population.zero_fraction < 0.0 || population.zero_fraction >= 1.0)
      throw std::invalid_argument("invalid synthetic population parameters");
  } else {
    throw std::invalid_argument("population.source must be synthetic or file");
  }
  rain.validate();
  // Throws on non-integral T_F / T_HO.
  frame::make_budget(frame.ofdma_s, frame.frame_s, 0, frame.handover_s, frame.n_rtt);
  if (frame.ra_routing_in_s < 0.0 || frame.ra_routing_out_s < 0.0)
    throw std::invalid_argument("routing delays must be >= 0");
  pilot.validate();
  solver.validate();
  if (!(solver.sub.gap_tol > 0.0)) throw std::invalid_argument("solver.gap_tol must be > 0");
  if (harness.frameworks.empty() || harness.csi.empty())
    throw std::invalid_argument("harness needs at least one framework and one csi mode");
}

Scenario load_string(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument(std::string("YAML parse error: ") + e.what());
  }
  Scenario sc = parse(root);
  sc.validate();
  return sc;
}

Scenario load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_string(ss.str());
}

std::string canonical_yaml(const Scenario& s) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "name" << YAML::Value << s.name;
  e << YAML::Key << "seed" << YAML::Value << s.seed;
  e << YAML::Key << "frames" << YAML::Value << s.frames;
  e << YAML::Key << "constellation" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "beams" << YAML::Value << s.beams;
  e << YAML::Key << "shells" << YAML::Value << YAML::BeginSeq;
  for (const auto& sh : s.constellation.shells) {
    e << YAML::BeginMap;
    e << YAML::Key << "id" << YAML::Value << sh.id;
    e << YAML::Key << "altitude_m" << YAML::Value << sh.altitude_m;
    e << YAML::Key << "inclination_deg" << YAML::Value << sh.inclination_deg;
    e << YAML::Key << "planes" << YAML::Value << sh.plane_count;
    e << YAML::Key << "sats_per_plane" << YAML::Value << sh.sats_per_plane;
    e << YAML::Key << "carrier_hz" << YAML::Value << sh.carrier_hz;
    e << YAML::Key << "bandwidth_hz" << YAML::Value << sh.bandwidth_hz;
    e << YAML::Key << "antenna_gain_dbi" << YAML::Value << sh.antenna_gain_dbi;
    e << YAML::Key << "tx_power_w" << YAML::Value << sh.tx_power_w;
    e << YAML::Key << "min_elevation_deg" << YAML::Value << sh.min_elevation_deg;
    e << YAML::Key << "raan_offset_rad" << YAML::Value << sh.raan_offset_rad;
    if (sh.rain) {
      e << YAML::Key << "rain_mu" << YAML::Value << sh.rain->mu;
      e << YAML::Key << "rain_omega" << YAML::Value << sh.rain->omega;
    }
    e << YAML::EndMap;
  }
  e << YAML::EndSeq << YAML::EndMap;
  e << YAML::Key << "ground" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "region" << YAML::Value << YAML::Flow << YAML::BeginSeq << s.region.lat_min
    << s.region.lat_max << s.region.lon_min << s.region.lon_max << s.region.cell_step_deg
    << YAML::EndSeq;
  e << YAML::Key << "active_fraction" << YAML::Value << s.active_fraction;
  e << YAML::Key << "population" << YAML::Value << YAML::Flow << YAML::BeginSeq
    << s.population.source << s.population.file << s.population.mean << s.population.dispersion
    << s.population.zero_fraction << YAML::EndSeq;
  e << YAML::Key << "noise" << YAML::Value << YAML::Flow << YAML::BeginSeq
    << s.noise.n0_dbm_per_hz << s.noise.user_gain_dbi << s.noise.pointing_loss_db << YAML::EndSeq;
  e << YAML::EndMap;
  e << YAML::Key << "rain" << YAML::Value << YAML::Flow << YAML::BeginSeq << s.rain_enabled
    << s.rain.intensity_per_km2 << s.rain.rain_height_km << s.rain.mean_rate_mmh
    << s.rain.mean_radius_km << s.rain.mean_active_h << s.rain.mean_inactive_h
    << s.rain.mark_is_radius << s.rain.guard_factor << YAML::EndSeq;
  e << YAML::Key << "frame" << YAML::Value << YAML::Flow << YAML::BeginSeq << s.frame.ofdma_s
    << s.frame.frame_s << s.frame.handover_s << s.frame.n_rtt << s.frame.ra_routing_in_s
    << s.frame.ra_routing_out_s << YAML::EndSeq;
  e << YAML::Key << "sensing" << YAML::Value << YAML::Flow << YAML::BeginSeq << s.pilot.pilot_len
    << s.pilot.feedback_len
    << (s.pilot.sampler == sense::PilotSampler::kSymbols ? "symbols" : "statistics")
    << YAML::EndSeq;
  e << YAML::Key << "solver" << YAML::Value << YAML::Flow << YAML::BeginSeq << s.solver.tau
    << s.solver.theta << s.solver.delta << s.solver.p_init << s.solver.n_iter
    << s.solver.sub.gap_tol << YAML::EndSeq;
  e << YAML::Key << "harness" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "frameworks" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (auto f : s.harness.frameworks) e << to_string(f);
  e << YAML::EndSeq;
  e << YAML::Key << "csi" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (auto m : s.harness.csi) e << std::string(sense::to_string(m));
  e << YAML::EndSeq;
  e << YAML::Key << "realization" << YAML::Value << to_string(s.harness.realization);
  e << YAML::Key << "wall_time_in_kpis" << YAML::Value << s.harness.wall_time_in_kpis;
  e << YAML::EndMap;
  e << YAML::EndMap;
  return e.c_str();
}

std::string digest(const Scenario& s) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_yaml(s))));
  return buf;
}

}  // namespace leo::config
