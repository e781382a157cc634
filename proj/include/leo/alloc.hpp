#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "leo/concave_solver.hpp"

namespace leo::alloc {

/// Inputs of one allocation round. Satellites are indexed locally (rows) in
/// ascending global id order; cells are the populated cells (columns).
/// rho(s, c) == 0 marks a pair without a usable link.
struct RateInput {
  std::vector<int> sat_ids;
  std::vector<int> cell_ids;
  Eigen::VectorXd users;     // M_c > 0
  Eigen::MatrixXd rho;       // bit/s, S x C
  Eigen::MatrixXd handover;  // H_{s,c}, seconds, S x C
  int n_comm{1};             // N_C
  int beams{1};              // N_B
  double ofdma_s{0.01};      // T
  double frame_s{10.0};      // T_F

  int sats() const { return static_cast<int>(rho.rows()); }
  int cells() const { return static_cast<int>(rho.cols()); }
  int budget() const { return n_comm * beams; }
  /// Throws std::invalid_argument on shape or sign errors.
  void validate() const;
};

struct SolverParams {
  double tau{0.5};
  double theta{0.01};
  double delta{10.0};
  double p_init{1.0};
  int n_iter{50};
  opt::Options sub;
  void validate() const;
};

using IntMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

/// Integer allocation X (OFDMA frames per satellite and cell).
struct AllocationMatrix {
  IntMatrix x;

  bool served(int s, int c) const { return x(s, c) > 0; }
  /// Serving satellite row of cell c, or -1.
  int serving(int c) const;
  int load(int s) const { return x.row(s).sum(); }
};

/// (T x - H alpha) rho / (T_F M). May be negative when T x < H alpha.
double per_user_throughput(int x, bool alpha, double rho, double handover_s, double users,
                           double ofdma_s, double frame_s);

/// Per-cell realized per-user rate sum_s R_{s,c}, clamped at zero per pair.
/// `negative_pairs`, when given, receives the number of pairs with T x < H.
Eigen::VectorXd cell_rates(const AllocationMatrix& X, const RateInput& in,
                           int* negative_pairs = nullptr);

/// sum_c M_c log(1 + sum_s R_{s,c}) with pairwise clamping at zero.
double objective_p1(const AllocationMatrix& X, const RateInput& in);

/// Feasibility report against every P1 constraint.
struct Feasibility {
  bool integral_bounds{true};
  bool budget{true};
  bool single_serving{true};
  bool ok() const { return integral_bounds && budget && single_serving; }
};
Feasibility check_feasibility(const AllocationMatrix& X, const RateInput& in);

struct LagrangianState {
  Eigen::MatrixXd w;         // S x C
  Eigen::VectorXd lambda;    // per cell
  Eigen::VectorXd penalty;   // p_c
};

struct SubproblemResult {
  Eigen::MatrixXd x_hat;  // S x C
  Eigen::VectorXd slack;  // per cell, in [-1, 0]
  opt::Solution solution;
};

/// Relaxed, penalized problem P2 at fixed (w, lambda, p).
SubproblemResult solve_subproblem(const LagrangianState& state, const RateInput& in,
                                  const SolverParams& params);

struct JmraTelemetry {
  int iterations{0};
  bool converged{false};
  std::vector<double> objective_trace;  // relaxed objective per iteration
  int violating_cells{0};               // g_c - 1 > theta at exit
  int multi_matched_cells{0};           // before repair
  double relaxed_objective{0.0};
  double final_objective{0.0};
  double wall_s{0.0};
  int newton_steps{0};
  double max_gap{0.0};
  Eigen::MatrixXd x_hat;  // relaxed solution at exit
};

/// Repair step: keep the best satellite of multi-matched cells, then trim
/// over-budget satellites at the largest rounding surplus.
AllocationMatrix adjust_allocation(const AllocationMatrix& X, const Eigen::MatrixXd& x_hat,
                                   const RateInput& in);

/// Round half away from zero and clamp to [0, N_C].
AllocationMatrix round_allocation(const Eigen::MatrixXd& x_hat, int n_comm);

/// Penalty/SCA multiplier loop, then rounding and adjust_allocation.
AllocationMatrix jmra(const RateInput& in, const SolverParams& params,
                      JmraTelemetry* telemetry = nullptr);

struct DmrabTelemetry {
  bool feasible{true};
  std::vector<int> infeasible_sats;  // global ids
  double final_objective{0.0};
  double wall_s{0.0};
};

/// Disjoint benchmark: match each cell to its best-rate satellite, then
/// allocate per satellite. Satellites whose allocation problem is infeasible
/// serve nothing and are reported in the telemetry.
AllocationMatrix dmrab(const RateInput& in, const SolverParams& params,
                       DmrabTelemetry* telemetry = nullptr);

struct BruteForceResult {
  AllocationMatrix x;
  double objective{0.0};
  std::uint64_t evaluated{0};
};

class TooLargeError : public std::runtime_error {
 public:
  TooLargeError(const std::string& what, double bound)
      : std::runtime_error(what), bound_(bound) {}
  double bound() const { return bound_; }

 private:
  double bound_;
};

/// Exhaustive P1 maximizer; refuses when the candidate bound exceeds `cap`.
BruteForceResult brute_force_p1(const RateInput& in, double cap = 1e7);

}  // namespace leo::alloc
