#pragma once

#include <functional>
#include <iosfwd>
#include "json.hpp"
#include <string>
#include <vector>

#include "leo/config.hpp"

namespace leo::harness {

struct KpiRecord {
  long frame{0};
  std::string framework;
  std::string csi;
  int pilot_len{0};
  double throughput_bps{0.0};  // sum over cells of per-user rates (verbatim)
  double per_user_bps{0.0};    // sum M R / sum M
  double jain{0.0};
  int handovers{0};
  double nmse_gamma{0.0};      // NaN when no sensing-capable pair exists
  double nmse_att{0.0};
  double solver_s{0.0};
  double ts_s{0.0};
};

struct FrameTelemetry {
  long frame{0};
  std::string framework;
  std::string csi;
  int visible_sats{0};
  int links{0};
  int n_comm{0};
  int iterations{0};
  bool converged{false};
  int violating_cells{0};
  int multi_matched_cells{0};
  double relaxed_objective{0.0};
  double final_objective{0.0};
  int newton_steps{0};
  bool feasible_p1{true};       // post-repair constraints hold
  bool framework_feasible{true};  // dmrab: every per-satellite problem solvable
  int negative_pairs{0};        // served pairs with T x < H
  int outage_pairs{0};          // served pairs realizing zero rate due to overestimate
  int served_cells{0};
  double nmse_gamma_rain{0.0};
  double nmse_gamma_dry{0.0};
  double solver_s{0.0};
  double ra_total_s{0.0};
  bool ra_deadline_met{true};
};

struct RunOutput {
  std::vector<KpiRecord> records;
  std::vector<FrameTelemetry> telemetry;
  nlohmann::json manifest;
};

struct RunOptions {
  std::string out_dir;  // empty: keep results in memory only
  std::function<void(const std::string&)> log;  // progress lines, optional
};

/// Simulates `scenario.frames` frames for every configured framework and CSI
/// mode. Environment (orbits, rain, links) is shared across combinations;
/// each combination keeps its own serving history for handovers.
RunOutput run_experiment(const config::Scenario& scenario, const RunOptions& options = {});

void write_kpis_csv(std::ostream& out, const std::vector<KpiRecord>& records, bool wall_time);
void write_telemetry_csv(std::ostream& out, const std::vector<FrameTelemetry>& rows);

/// Parses a kpis.csv produced by write_kpis_csv.
std::vector<KpiRecord> read_kpis_csv(std::istream& in);

}  // namespace leo::harness
