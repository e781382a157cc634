// Command-line front end: run, sweep, oracle, validate, plot.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "leo/config.hpp"
#include "leo/frame.hpp"
#include "leo/harness.hpp"
#include "leo/oracle.hpp"
#include "leo/orbit.hpp"
#include "leo/plot.hpp"
#include "leo/random.hpp"
#include "leo/sense.hpp"

namespace fs = std::filesystem;
using namespace leo;

namespace {

struct Overrides {
  std::string config;
  std::uint64_t seed{0};
  bool has_seed{false};
  int frames{-1};
  std::vector<std::string> frameworks;
  std::vector<std::string> csi;
  int pilot_len{0};
  std::string realization;
  bool verbose{false};
};

void add_overrides(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "scenario YAML file")->required()->check(CLI::ExistingFile);
  app->add_option_function<std::uint64_t>(
      "--seed", [&o](std::uint64_t s) { o.seed = s, o.has_seed = true; }, "master seed");
  app->add_option("--frames", o.frames, "number of frames K");
  app->add_option("--framework", o.frameworks, "jmra, dmrab or both (repeatable)")
      ->check(CLI::IsMember({"jmra", "dmrab", "both"}));
  app->add_option("--csi", o.csi, "perfect, sensed or none (repeatable)")
      ->check(CLI::IsMember({"perfect", "sensed", "none"}));
  app->add_option("--pilot-len", o.pilot_len, "pilot length (power of two, 4..65536)");
  app->add_option("--realization", o.realization, "outage or capped")
      ->check(CLI::IsMember({"outage", "capped"}));
  app->add_flag("-v,--verbose", o.verbose, "per-frame progress on stderr");
}

config::Scenario apply(const Overrides& o) {
  config::Scenario sc = config::load_file(o.config);
  if (o.has_seed) sc.seed = o.seed;
  if (o.frames >= 0) sc.frames = o.frames;
  if (!o.frameworks.empty()) {
    sc.harness.frameworks.clear();
    for (const auto& f : o.frameworks) {
      if (f == "both") {
        sc.harness.frameworks = {config::Framework::kJmra, config::Framework::kDmrab};
        break;
      }
      sc.harness.frameworks.push_back(config::parse_framework(f));
    }
  }
  if (!o.csi.empty()) {
    sc.harness.csi.clear();
    for (const auto& m : o.csi) sc.harness.csi.push_back(sense::parse_csi_mode(m));
  }
  if (o.pilot_len > 0) {
    if ((o.pilot_len & (o.pilot_len - 1)) != 0 || o.pilot_len < 4 || o.pilot_len > 65536)
      throw std::invalid_argument("--pilot-len must be a power of two in [4, 65536]");
    sc.pilot.pilot_len = o.pilot_len;
  }
  if (!o.realization.empty()) sc.harness.realization = config::parse_realization(o.realization);
  sc.validate();
  return sc;
}

harness::RunOptions run_options(const std::string& out, bool verbose) {
  harness::RunOptions ro;
  ro.out_dir = out;
  if (verbose) ro.log = [](const std::string& s) { std::cerr << s << '\n'; };
  return ro;
}

void print_summary(const nlohmann::json& manifest) {
  for (const auto& s : manifest["summaries"]) {
    if (s["frames"].get<int>() == 0) continue;
    std::printf("%-6s %-8s thr=%.4g bps  per-user=%.4g bps  jain=%.3f  ho/s=%s  nmse=%s  conv=%d/%d\n",
                s["framework"].get<std::string>().c_str(), s["csi"].get<std::string>().c_str(),
                s["mean_throughput_bps"].get<double>(),
                s["mean_per_user_throughput_bps"].is_null() ? 0.0 : s["mean_per_user_throughput_bps"].get<double>(),
                s["mean_jain"].is_null() ? 0.0 : s["mean_jain"].get<double>(),
                s["handovers_per_second"].dump().c_str(), s["mean_nmse_gamma"].dump().c_str(),
                s["converged_frames"].get<int>(), s["frames"].get<int>());
  }
}

int cmd_validate(const std::string& path) {
  const config::Scenario sc = config::load_file(path);
  ground::CellGrid grid = ground::build_grid(sc.region);
  std::printf("scenario   %s (digest %s)\n", sc.name.c_str(), config::digest(sc).c_str());
  std::printf("region     %d x %d cells of %.4g deg\n", grid.rows, grid.cols, sc.region.cell_step_deg);
  for (const auto& s : sc.constellation.shells)
    std::printf("shell %-4s %d sats, h=%.0f km, i=%.1f deg, f=%.4g GHz, B=%.4g MHz%s\n", s.id.c_str(),
                s.total(), s.altitude_m / 1e3, s.inclination_deg, s.carrier_hz / 1e9,
                s.bandwidth_hz / 1e6, s.sensing_capable() ? " (senses rain)" : "");
  const double t_eta = orbit::max_propagation_time(sc.constellation.shells);
  const double bound = frame::min_handover_time(t_eta, sc.frame.ofdma_s, sc.frame.n_rtt);
  std::printf("t_eta      %.4f ms; handover bound %.0f ms, configured %.0f ms%s\n", t_eta * 1e3,
              bound * 1e3, sc.frame.handover_s * 1e3,
              sc.frame.handover_s + 1e-12 < bound ? "  WARNING: below bound" : "");
  const auto fb = frame::make_budget(sc.frame.ofdma_s, sc.frame.frame_s, 0, sc.frame.handover_s,
                                     sc.frame.n_rtt);
  std::printf("frame      N_T=%d, T_F=%.4g s, T=%.4g ms\n", fb.n_total, fb.frame_s, fb.ofdma_s * 1e3);
  std::printf("ok\n");
  return 0;
}

int cmd_oracle(const std::string& path, int instances, double handover_ms) {
  const config::Scenario sc = config::load_file(path);
  oracle::ToySpec spec;
  spec.handover_s = handover_ms * 1e-3;
  Rng rng = make_rng(sc.seed, "oracle");
  int within = 0, dominated = 0, feasible = 0;
  std::printf("%4s %12s %12s %12s %7s %s\n", "inst", "brute", "jmra", "dmrab", "ratio", "notes");
  for (int i = 0; i < instances; ++i) {
    const auto in = oracle::random_instance(spec, rng);
    const auto cmp = oracle::compare(in, sc.solver);
    const double ratio = cmp.brute > 0 ? cmp.jmra / cmp.brute : 1.0;
    if (ratio >= 0.95) ++within;
    if (cmp.dmrab_feasible) {
      ++feasible;
      if (cmp.dmrab <= cmp.jmra + 1e-9 * std::max(1.0, std::fabs(cmp.jmra))) ++dominated;
    }
    std::printf("%4d %12.6g %12.6g %12.6g %7.4f %s%s\n", i, cmp.brute, cmp.jmra, cmp.dmrab, ratio,
                cmp.dmrab_feasible ? "" : "dmrab-infeasible ", cmp.jmra_converged ? "" : "jmra-not-converged");
  }
  std::printf("jmra >= 0.95 brute on %d/%d; dmrab <= jmra on %d/%d feasible\n", within, instances,
              dominated, feasible);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sensing-assisted LEO resource allocation simulator"};
  app.set_version_flag("--version", std::string(LEO_VERSION));
  app.require_subcommand(1);

  Overrides run_o;
  std::string run_out = "out";
  auto* run = app.add_subcommand("run", "simulate frames and write kpis.csv, telemetry.csv, manifest.json");
  add_overrides(run, run_o);
  run->add_option("--out", run_out, "output directory");

  Overrides sw_o;
  std::string sw_out = "sweep_out", sw_param;
  std::vector<double> sw_values;
  auto* sweep = app.add_subcommand("sweep", "repeat a run over values of one parameter");
  add_overrides(sweep, sw_o);
  sweep->add_option("--param", sw_param, "pilot_len, t_f (seconds) or t_ho (milliseconds)")
      ->required()
      ->check(CLI::IsMember({"pilot_len", "t_f", "t_ho"}));
  sweep->add_option("--values", sw_values, "parameter values")->required()->delimiter(',');
  sweep->add_option("--out", sw_out, "output directory");

  std::string oracle_cfg;
  int oracle_n = 20;
  double oracle_ho_ms = 0.0;
  auto* orc = app.add_subcommand("oracle", "compare jmra and dmrab with brute force on toy instances");
  orc->add_option("--config", oracle_cfg, "scenario YAML (solver settings, seed)")->required()->check(CLI::ExistingFile);
  orc->add_option("--instances", oracle_n, "number of random instances");
  orc->add_option("--handover-ms", oracle_ho_ms, "handover penalty applied to every pair");

  std::string val_cfg;
  auto* val = app.add_subcommand("validate", "parse and check a scenario file");
  val->add_option("--config", val_cfg, "scenario YAML")->required()->check(CLI::ExistingFile);

  std::vector<std::string> plot_runs;
  std::string plot_out = "plots";
  auto* plt = app.add_subcommand("plot", "render SVG figures from finished runs");
  plt->add_option("--runs", plot_runs, "run directories (each with kpis.csv and manifest.json)")
      ->required();
  plt->add_option("--out", plot_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto sc = apply(run_o);
      const auto res = harness::run_experiment(sc, run_options(run_out, run_o.verbose));
      print_summary(res.manifest);
      std::printf("wrote %s\n", run_out.c_str());
    } else if (*sweep) {
      const auto base = apply(sw_o);
      std::vector<plot::RunData> runs;
      fs::create_directories(sw_out);
      std::ofstream summary(fs::path(sw_out) / "sweep.csv");
      summary << "param,value,framework,csi,mean_throughput_bps,mean_per_user_bps,mean_jain,"
                 "handovers_per_second,mean_nmse_gamma\n";
      for (double v : sw_values) {
        auto sc = base;
        if (sw_param == "pilot_len") sc.pilot.pilot_len = static_cast<int>(v);
        if (sw_param == "t_f") sc.frame.frame_s = v;
        if (sw_param == "t_ho") sc.frame.handover_s = v * 1e-3;
        sc.validate();
        std::ostringstream name;
        name << sw_param << '_' << v;
        const std::string dir = (fs::path(sw_out) / name.str()).string();
        std::fprintf(stderr, "sweep %s = %g\n", sw_param.c_str(), v);
        const auto res = harness::run_experiment(sc, run_options(dir, sw_o.verbose));
        for (const auto& s : res.manifest["summaries"]) {
          if (s["frames"].get<int>() == 0) continue;
          summary << sw_param << ',' << v << ',' << s["framework"].get<std::string>() << ','
                  << s["csi"].get<std::string>() << ',' << s["mean_throughput_bps"].dump() << ','
                  << s["mean_per_user_throughput_bps"].dump() << ',' << s["mean_jain"].dump() << ','
                  << s["handovers_per_second"].dump() << ',' << s["mean_nmse_gamma"].dump() << '\n';
        }
        runs.push_back(plot::load_run(dir));
      }
      for (const auto& p : plot::emit_standard_plots(runs, (fs::path(sw_out) / "plots").string()))
        std::printf("wrote %s\n", p.c_str());
    } else if (*orc) {
      return cmd_oracle(oracle_cfg, oracle_n, oracle_ho_ms);
    } else if (*val) {
      return cmd_validate(val_cfg);
    } else if (*plt) {
      std::vector<plot::RunData> runs;
      for (const auto& d : plot_runs) runs.push_back(plot::load_run(d));
      for (const auto& p : plot::emit_standard_plots(runs, plot_out)) std::printf("wrote %s\n", p.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
