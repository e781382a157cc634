#include "leo/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "leo/alloc.hpp"
#include "leo/frame.hpp"
#include "leo/kpi.hpp"
#include "leo/link.hpp"
#include "leo/orbit.hpp"
#include "leo/rain.hpp"
#include "leo/random.hpp"
#include "leo/sense.hpp"
#include "leo/simd/kernels.hpp"

namespace leo::harness {

namespace {

using config::Framework;
using config::Realization;
using config::Scenario;
using Clock = std::chrono::steady_clock;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ground::CellGrid build_population(const Scenario& sc) {
  ground::CellGrid grid = ground::build_grid(sc.region);
  if (sc.population.source == "file") {
    ground::load_population_file(grid, sc.population.file, sc.active_fraction);
  } else {
    ground::synth_population(grid, derive_seed(sc.seed, "population"), sc.population.mean,
                             sc.population.dispersion, sc.population.zero_fraction,
                             sc.active_fraction);
  }
  return grid;
}

// Longest sensing sub-frame over the sensing-capable satellites in view.
sense::SensingTiming frame_sensing_timing(const Scenario& sc, const link::LinkTable& table,
                                          double max_prop_s) {
  std::map<int, int> cells_per_sat;
  std::map<int, int> shell_of;
  for (const auto& ls : table.links) {
    if (!sc.constellation.shells[static_cast<std::size_t>(ls.shell)].sensing_capable()) continue;
    ++cells_per_sat[ls.sat_id];
    shell_of[ls.sat_id] = ls.shell;
  }
  sense::SensingTiming worst;
  for (const auto& [sat, count] : cells_per_sat) {
    const auto& shell = sc.constellation.shells[static_cast<std::size_t>(shell_of[sat])];
    const auto t = sense::sensing_timing(count, sc.beams, sc.pilot.pilot_len,
                                         sc.pilot.feedback_len, shell.bandwidth_hz, max_prop_s,
                                         sc.frame.ofdma_s);
    if (t.frames > worst.frames) worst = t;
  }
  return worst;
}

struct Combo {
  Framework framework{Framework::kJmra};
  sense::CsiMode csi{sense::CsiMode::kPerfect};
  std::vector<int> serving_prev;  // global sat id per populated cell, -1 unserved
  // Running aggregates for the manifest.
  std::vector<double> throughput, per_user, jain, nmse_gamma, nmse_att, solver_s;
  long handovers_after_first{0};
  int frames{0};
  int converged{0};
  int infeasible_frames{0};
  int p1_violations{0};
  int ra_met{0};
  double ra_total_max{0.0};
  double ra_budget_min{std::numeric_limits<double>::infinity()};
};

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  int n = 0;
  for (double x : v)
    if (std::isfinite(x)) {
      s += x;
      ++n;
    }
  return n ? s / n : kNaN;
}

nlohmann::json json_number(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

RunOutput run_experiment(const Scenario& sc, const RunOptions& options) {
  sc.validate();
  auto log = [&](const std::string& s) {
    if (options.log) options.log(s);
  };

  const ground::CellGrid grid = build_population(sc);
  const std::vector<int> cells = grid.populated_cells();
  if (cells.empty()) throw std::invalid_argument("no populated cells in the region");
  std::vector<double> users(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i)
    users[i] = static_cast<double>(grid.cells[static_cast<std::size_t>(cells[i])].active_users);
  std::vector<int> column_of(grid.size(), -1);
  for (std::size_t i = 0; i < cells.size(); ++i) column_of[static_cast<std::size_t>(cells[i])] = static_cast<int>(i);

  const double t_eta = orbit::max_propagation_time(sc.constellation.shells);
  const double ho_bound = frame::min_handover_time(t_eta, sc.frame.ofdma_s, sc.frame.n_rtt);
  const rain::DtmcProbs probs = rain::dtmc_probs(sc.rain, sc.frame.frame_s);

  rain::RainField field;
  if (sc.rain_enabled) field = rain::init_field(grid, sc.rain, sc.frame.frame_s, derive_seed(sc.seed, "rain"));

  std::vector<Combo> combos;
  for (auto f : sc.harness.frameworks)
    for (auto m : sc.harness.csi) {
      Combo cb;
      cb.framework = f;
      cb.csi = m;
      cb.serving_prev.assign(cells.size(), -1);
      combos.push_back(std::move(cb));
    }

  RunOutput out;
  for (long k = 0; k < sc.frames; ++k) {
    if (sc.rain_enabled && k > 0) {
      Rng rr = make_rng(sc.seed, "rain.step", {static_cast<std::uint64_t>(k)});
      rain::step(field, probs, rr);
      field.frame = k;
    }
    const auto now = orbit::propagate(sc.constellation, k, sc.frame.frame_s);
    const auto next = orbit::propagate(sc.constellation, k + 1, sc.frame.frame_s);
    const auto visible = orbit::visible_satellites(sc.constellation, now, next, grid, cells);
    link::LinkContext ctx{&sc.constellation, &grid, sc.rain_enabled ? &field : nullptr,
                          sc.rain.rain_height_km, sc.noise};
    const link::LinkTable table = link::build_link_table(ctx, now, next, visible, cells);

    // Satellites with at least one link, ascending by id.
    std::vector<int> sat_ids;
    for (const auto& ls : table.links) sat_ids.push_back(ls.sat_id);
    std::sort(sat_ids.begin(), sat_ids.end());
    sat_ids.erase(std::unique(sat_ids.begin(), sat_ids.end()), sat_ids.end());
    std::map<int, int> row_of;
    for (std::size_t i = 0; i < sat_ids.size(); ++i) row_of[sat_ids[i]] = static_cast<int>(i);
    const int S = static_cast<int>(sat_ids.size()), C = static_cast<int>(cells.size());

    Eigen::MatrixXd rho_true = Eigen::MatrixXd::Zero(S, C);
    for (const auto& ls : table.links)
      rho_true(row_of[ls.sat_id], column_of[static_cast<std::size_t>(ls.cell)]) = ls.rate_bps;

    std::map<sense::CsiMode, std::vector<sense::SensingReport>> reports;
    for (auto m : sc.harness.csi)
      if (!reports.count(m))
        reports[m] = sense::run_sensing_phase(table, sc.constellation, m, sc.pilot,
                                              derive_seed(sc.seed, "sense"));

    for (auto& cb : combos) {
      const auto& rep = reports.at(cb.csi);
      const bool sensed = cb.csi == sense::CsiMode::kSensed;
      const sense::SensingTiming timing =
          sensed ? frame_sensing_timing(sc, table, t_eta) : sense::SensingTiming{};
      const frame::FrameBudget budget = frame::make_budget(
          sc.frame.ofdma_s, sc.frame.frame_s, timing.frames, sc.frame.handover_s, sc.frame.n_rtt);

      alloc::RateInput in;
      in.sat_ids = sat_ids;
      in.cell_ids = cells;
      in.users = Eigen::Map<const Eigen::VectorXd>(users.data(), C);
      in.rho = Eigen::MatrixXd::Zero(S, C);
      in.handover = Eigen::MatrixXd::Zero(S, C);
      in.n_comm = budget.n_comm;
      in.beams = sc.beams;
      in.ofdma_s = sc.frame.ofdma_s;
      in.frame_s = sc.frame.frame_s;
      std::vector<double> g_true, g_est, a_true, a_est;
      std::vector<double> g_true_rain, g_est_rain, g_true_dry, g_est_dry;
      for (std::size_t i = 0; i < table.links.size(); ++i) {
        const auto& ls = table.links[i];
        const auto& shell = sc.constellation.shells[static_cast<std::size_t>(ls.shell)];
        const int r = row_of[ls.sat_id], c = column_of[static_cast<std::size_t>(ls.cell)];
        in.rho(r, c) = ls.in_range ? shell.bandwidth_hz * std::log2(1.0 + rep[i].snr_hat) : 0.0;
        if (shell.sensing_capable()) {
          g_true.push_back(ls.snr);
          g_est.push_back(rep[i].snr_hat);
          a_true.push_back(ls.attenuation());
          a_est.push_back(rep[i].att_hat);
          auto& gt = ls.rain_rate_mmh > 0.0 ? g_true_rain : g_true_dry;
          auto& ge = ls.rain_rate_mmh > 0.0 ? g_est_rain : g_est_dry;
          gt.push_back(ls.snr);
          ge.push_back(rep[i].snr_hat);
        }
      }
      for (int c = 0; c < C; ++c)
        for (int s = 0; s < S; ++s)
          in.handover(s, c) = frame::handover_penalty(
              cb.serving_prev[static_cast<std::size_t>(c)] == sat_ids[static_cast<std::size_t>(s)],
              sc.frame.handover_s);

      FrameTelemetry tel;
      tel.frame = k;
      tel.framework = config::to_string(cb.framework);
      tel.csi = std::string(sense::to_string(cb.csi));
      tel.visible_sats = static_cast<int>(visible.size());
      tel.links = static_cast<int>(table.links.size());
      tel.n_comm = budget.n_comm;

      alloc::AllocationMatrix X;
      if (cb.framework == Framework::kJmra) {
        alloc::JmraTelemetry jt;
        X = alloc::jmra(in, sc.solver, &jt);
        tel.iterations = jt.iterations;
        tel.converged = jt.converged;
        tel.violating_cells = jt.violating_cells;
        tel.multi_matched_cells = jt.multi_matched_cells;
        tel.relaxed_objective = jt.relaxed_objective;
        tel.final_objective = jt.final_objective;
        tel.newton_steps = jt.newton_steps;
        tel.solver_s = jt.wall_s;
      } else {
        alloc::DmrabTelemetry dt;
        X = alloc::dmrab(in, sc.solver, &dt);
        tel.framework_feasible = dt.feasible;
        tel.final_objective = dt.final_objective;
        tel.converged = true;
        tel.solver_s = dt.wall_s;
      }
      tel.feasible_p1 = alloc::check_feasibility(X, in).ok();

      // Realized rates: decisions used the belief, delivery uses the truth.
      std::vector<double> rate(static_cast<std::size_t>(C), 0.0);
      std::vector<int> serving(static_cast<std::size_t>(C), -1);
      for (int c = 0; c < C; ++c)
        for (int s = 0; s < S; ++s) {
          const int x = X.x(s, c);
          if (x <= 0) continue;
          serving[static_cast<std::size_t>(c)] = sat_ids[static_cast<std::size_t>(s)];
          ++tel.served_cells;
          const double believed = in.rho(s, c), truth = rho_true(s, c);
          double realized = std::min(believed, truth);
          if (sc.harness.realization == Realization::kOutage && believed > truth) {
            realized = 0.0;
            ++tel.outage_pairs;
          }
          const double r = alloc::per_user_throughput(x, true, realized, in.handover(s, c),
                                                      in.users(c), in.ofdma_s, in.frame_s);
          if (r < 0.0) ++tel.negative_pairs;
          rate[static_cast<std::size_t>(c)] += std::max(r, 0.0);
        }

      KpiRecord rec;
      rec.frame = k;
      rec.framework = tel.framework;
      rec.csi = tel.csi;
      rec.pilot_len = sc.pilot.pilot_len;
      for (double r : rate) rec.throughput_bps += r;
      rec.per_user_bps = kpi::per_user_throughput(rate, users);
      rec.jain = kpi::jain_index(rate, users);
      rec.handovers = kpi::handover_count(cb.serving_prev, serving);
      rec.nmse_gamma = g_true.empty() ? kNaN : kpi::nmse(g_true, g_est);
      rec.nmse_att = a_true.empty() ? kNaN : kpi::nmse(a_true, a_est);
      tel.nmse_gamma_rain = g_true_rain.empty() ? kNaN : kpi::nmse(g_true_rain, g_est_rain);
      tel.nmse_gamma_dry = g_true_dry.empty() ? kNaN : kpi::nmse(g_true_dry, g_est_dry);
      rec.solver_s = tel.solver_s;
      rec.ts_s = budget.sensing_s();

      frame::FrameBudget with_ra = budget;
      with_ra.ra_routing_in_s = sc.frame.ra_routing_in_s;
      with_ra.ra_routing_out_s = sc.frame.ra_routing_out_s;
      with_ra.ra_solver_s = tel.solver_s;
      tel.ra_total_s = with_ra.ra_total_s();
      tel.ra_deadline_met = frame::ra_deadline_check(tel.ra_total_s, with_ra);

      cb.serving_prev = serving;
      ++cb.frames;
      cb.throughput.push_back(rec.throughput_bps);
      cb.per_user.push_back(rec.per_user_bps);
      cb.jain.push_back(rec.jain);
      cb.nmse_gamma.push_back(rec.nmse_gamma);
      cb.nmse_att.push_back(rec.nmse_att);
      cb.solver_s.push_back(tel.solver_s);
      if (k > 0) cb.handovers_after_first += rec.handovers;
      if (tel.converged) ++cb.converged;
      if (!tel.framework_feasible) ++cb.infeasible_frames;
      if (!tel.feasible_p1) ++cb.p1_violations;
      if (tel.ra_deadline_met) ++cb.ra_met;
      cb.ra_total_max = std::max(cb.ra_total_max, tel.ra_total_s);
      cb.ra_budget_min = std::min(cb.ra_budget_min, budget.ra_budget_s());

      out.records.push_back(rec);
      out.telemetry.push_back(tel);
      log("frame " + std::to_string(k) + " " + rec.framework + "/" + rec.csi + ": S=" +
          std::to_string(S) + " C=" + std::to_string(C) + " thr=" + fmt_double(rec.throughput_bps) +
          " jain=" + fmt_double(rec.jain) + " it=" + std::to_string(tel.iterations) +
          " t=" + fmt_double(tel.solver_s) + "s");
    }
  }

  nlohmann::json m;
  m["config_digest"] = config::digest(sc);
  m["scenario"] = sc.name;
  m["seed"] = sc.seed;
  m["frames"] = sc.frames;
  m["software_version"] = LEO_VERSION;
  m["simd_isa"] = std::string(simd::isa_name(simd::active_isa()));
  m["realization"] = config::to_string(sc.harness.realization);
  m["pilot_len"] = sc.pilot.pilot_len;
  m["frame_s"] = sc.frame.frame_s;
  m["handover_s"] = sc.frame.handover_s;
  m["populated_cells"] = cells.size();
  m["total_cells"] = grid.size();
  m["active_users"] = grid.total_active_users();
  m["max_propagation_s"] = t_eta;
  m["handover"] = {{"configured_s", sc.frame.handover_s},
                   {"lower_bound_s", ho_bound},
                   {"warning", sc.frame.handover_s + 1e-12 < ho_bound}};
  m["kpis_wall_time"] = sc.harness.wall_time_in_kpis;
  nlohmann::json summaries = nlohmann::json::array();
  for (const auto& cb : combos) {
    nlohmann::json s;
    s["framework"] = config::to_string(cb.framework);
    s["csi"] = std::string(sense::to_string(cb.csi));
    s["frames"] = cb.frames;
    if (cb.frames > 0) {
      s["mean_throughput_bps"] = kpi::mean_throughput(cb.throughput);
      s["mean_per_user_throughput_bps"] = json_number(mean_of(cb.per_user));
      s["mean_jain"] = json_number(mean_of(cb.jain));
      s["handovers_per_second"] =
          cb.frames > 1 ? json_number(kpi::handovers_per_second(
                                          static_cast<int>(cb.handovers_after_first),
                                          sc.frame.frame_s) /
                                      (cb.frames - 1))
                        : nlohmann::json(nullptr);
      s["mean_nmse_gamma"] = json_number(mean_of(cb.nmse_gamma));
      s["mean_nmse_att"] = json_number(mean_of(cb.nmse_att));
      s["mean_solver_s"] = json_number(mean_of(cb.solver_s));
      s["max_solver_s"] = *std::max_element(cb.solver_s.begin(), cb.solver_s.end());
      s["converged_frames"] = cb.converged;
      s["framework_infeasible_frames"] = cb.infeasible_frames;
      s["p1_violation_frames"] = cb.p1_violations;
      s["ra_deadline"] = {{"budget_s", cb.ra_budget_min},
                          {"max_ra_total_s", cb.ra_total_max},
                          {"frames_met", cb.ra_met},
                          {"all_met", cb.ra_met == cb.frames}};
    }
    summaries.push_back(s);
  }
  m["summaries"] = summaries;
  out.manifest = m;

  if (!options.out_dir.empty()) {
    std::filesystem::create_directories(options.out_dir);
    const std::filesystem::path dir(options.out_dir);
    {
      std::ofstream f(dir / "kpis.csv", std::ios::binary);
      write_kpis_csv(f, out.records, sc.harness.wall_time_in_kpis);
    }
    {
      std::ofstream f(dir / "telemetry.csv", std::ios::binary);
      write_telemetry_csv(f, out.telemetry);
    }
    {
      std::ofstream f(dir / "manifest.json", std::ios::binary);
      f << out.manifest.dump(2) << "\n";
    }
  }
  return out;
}

void write_kpis_csv(std::ostream& out, const std::vector<KpiRecord>& records, bool wall_time) {
  out << "frame,framework,csi,pilot_len,throughput_bps,jain,handovers,nmse_gamma,nmse_att,"
         "solver_ms,ts_ms\n";
  for (const auto& r : records) {
    out << r.frame << ',' << r.framework << ',' << r.csi << ',' << r.pilot_len << ','
        << fmt_double(r.throughput_bps) << ',' << fmt_double(r.jain) << ',' << r.handovers << ','
        << fmt_double(r.nmse_gamma) << ',' << fmt_double(r.nmse_att) << ','
        << (wall_time ? fmt_double(r.solver_s * 1e3) : std::string()) << ','
        << fmt_double(r.ts_s * 1e3) << '\n';
  }
}

void write_telemetry_csv(std::ostream& out, const std::vector<FrameTelemetry>& rows) {
  out << "frame,framework,csi,visible_sats,links,n_comm,iterations,converged,violating_cells,"
         "multi_matched_cells,relaxed_objective,final_objective,newton_steps,feasible_p1,"
         "framework_feasible,negative_pairs,outage_pairs,served_cells,nmse_gamma_rain,"
         "nmse_gamma_dry,solver_ms,ra_total_ms,ra_deadline_met\n";
  for (const auto& t : rows) {
    out << t.frame << ',' << t.framework << ',' << t.csi << ',' << t.visible_sats << ','
        << t.links << ',' << t.n_comm << ',' << t.iterations << ',' << t.converged << ','
        << t.violating_cells << ',' << t.multi_matched_cells << ','
        << fmt_double(t.relaxed_objective) << ',' << fmt_double(t.final_objective) << ','
        << t.newton_steps << ',' << t.feasible_p1 << ',' << t.framework_feasible << ','
        << t.negative_pairs << ',' << t.outage_pairs << ',' << t.served_cells << ','
        << fmt_double(t.nmse_gamma_rain) << ',' << fmt_double(t.nmse_gamma_dry) << ','
        << fmt_double(t.solver_s * 1e3) << ',' << fmt_double(t.ra_total_s * 1e3) << ','
        << t.ra_deadline_met << '\n';
  }
}

std::vector<KpiRecord> read_kpis_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("frame,framework,csi", 0) != 0)
    throw std::runtime_error("not a kpis.csv file");
  std::vector<KpiRecord> out;
  auto num = [](const std::string& s) { return s.empty() || s == "nan" ? kNaN : std::stod(s); };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) f.push_back(tok);
    if (line.back() == ',') f.emplace_back();
    if (f.size() != 11) throw std::runtime_error("malformed kpis.csv row: " + line);
    KpiRecord r;
    r.frame = std::stol(f[0]);
    r.framework = f[1];
    r.csi = f[2];
    r.pilot_len = std::stoi(f[3]);
    r.throughput_bps = num(f[4]);
    r.jain = num(f[5]);
    r.handovers = std::stoi(f[6]);
    r.nmse_gamma = num(f[7]);
    r.nmse_att = num(f[8]);
    r.solver_s = num(f[9]) * 1e-3;
    r.ts_s = num(f[10]) * 1e-3;
    out.push_back(r);
  }
  return out;
}

}  // namespace leo::harness
