#include "leo/alloc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace leo::alloc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Pair rate with alpha = 1, used for argmax decisions.
double served_rate(const RateInput& in, int s, int c, int x) {
  return per_user_throughput(x, true, in.rho(s, c), in.handover(s, c), in.users(c), in.ofdma_s,
                             in.frame_s);
}

// While a satellite exceeds its budget, take one frame from its cell with
// the largest rounding surplus x - x_hat (lowest column on ties).
void repair_budgets(AllocationMatrix& X, const Eigen::MatrixXd& x_hat, const RateInput& in) {
  const int budget = in.budget();
  for (int s = 0; s < in.sats(); ++s) {
    int excess = X.load(s) - budget;
    while (excess > 0) {
      int best = -1;
      double best_surplus = -std::numeric_limits<double>::infinity();
      for (int c = 0; c < in.cells(); ++c) {
        if (X.x(s, c) <= 0) continue;
        const double surplus = X.x(s, c) - x_hat(s, c);
        if (surplus > best_surplus) {
          best_surplus = surplus;
          best = c;
        }
      }
      --X.x(s, best);
      --excess;
    }
  }
}

}  // namespace

void RateInput::validate() const {
  const auto S = rho.rows(), C = rho.cols();
  if (static_cast<Eigen::Index>(sat_ids.size()) != S ||
      static_cast<Eigen::Index>(cell_ids.size()) != C || users.size() != C ||
      handover.rows() != S || handover.cols() != C)
    throw std::invalid_argument("rate input shape mismatch");
  if (!std::is_sorted(sat_ids.begin(), sat_ids.end()))
    throw std::invalid_argument("satellite ids must be ascending");
  if ((rho.array() < 0.0).any() || !rho.allFinite())
    throw std::invalid_argument("rates must be finite and nonnegative");
  if ((handover.array() < 0.0).any()) throw std::invalid_argument("handover time must be >= 0");
  if (C > 0 && (users.array() <= 0.0).any())
    throw std::invalid_argument("only cells with active users may be allocated");
  if (n_comm < 1 || beams < 1 || !(ofdma_s > 0.0) || !(frame_s > 0.0))
    throw std::invalid_argument("invalid frame parameters");
}

void SolverParams::validate() const {
  if (!(tau > 0.0) || !(theta > 0.0) || !(delta > 1.0) || !(p_init > 0.0) || n_iter < 1)
    throw std::invalid_argument("invalid solver parameters");
}

int AllocationMatrix::serving(int c) const {
  for (int s = 0; s < x.rows(); ++s)
    if (x(s, c) > 0) return s;
  return -1;
}

double per_user_throughput(int x, bool alpha, double rho, double handover_s, double users,
                           double ofdma_s, double frame_s) {
  return (ofdma_s * x - handover_s * (alpha ? 1.0 : 0.0)) * rho / (frame_s * users);
}

Eigen::VectorXd cell_rates(const AllocationMatrix& X, const RateInput& in, int* negative_pairs) {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(in.cells());
  int neg = 0;
  for (int c = 0; c < in.cells(); ++c)
    for (int s = 0; s < in.sats(); ++s) {
      if (X.x(s, c) <= 0) continue;
      const double v = served_rate(in, s, c, X.x(s, c));
      if (v < 0.0) ++neg;
      r(c) += std::max(v, 0.0);
    }
  if (negative_pairs) *negative_pairs = neg;
  return r;
}

double objective_p1(const AllocationMatrix& X, const RateInput& in) {
  const Eigen::VectorXd r = cell_rates(X, in);
  double f = 0.0;
  for (int c = 0; c < in.cells(); ++c) f += in.users(c) * std::log1p(r(c));
  return f;
}

Feasibility check_feasibility(const AllocationMatrix& X, const RateInput& in) {
  Feasibility f;
  if (X.x.rows() != in.sats() || X.x.cols() != in.cells()) {
    f.integral_bounds = false;
    return f;
  }
  if ((X.x.array() < 0).any() || (X.x.array() > in.n_comm).any()) f.integral_bounds = false;
  for (int s = 0; s < in.sats(); ++s)
    if (X.load(s) > in.budget()) f.budget = false;
  for (int c = 0; c < in.cells(); ++c)
    if ((X.x.col(c).array() > 0).count() > 1) f.single_serving = false;
  return f;
}

SubproblemResult solve_subproblem(const LagrangianState& state, const RateInput& in,
                                  const SolverParams& params) {
  const int S = in.sats(), C = in.cells();
  opt::Problem prob;
  prob.n_sats = S;
  prob.cap.assign(static_cast<std::size_t>(S), static_cast<double>(in.budget()));
  prob.cells.resize(static_cast<std::size_t>(C));
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(C));
  for (int c = 0; c < C; ++c) {
    auto& cell = prob.cells[static_cast<std::size_t>(c)];
    cell.weight = in.users(c);
    cell.offset = 1.0;
    cell.penalized = true;
    cell.p = state.penalty(c);
    cell.lambda = state.lambda(c);
    for (int s = 0; s < S; ++s) {
      if (!(in.rho(s, c) > 0.0)) continue;
      const double a = in.rho(s, c) * (in.ofdma_s - in.handover(s, c) * state.w(s, c)) /
                       (in.frame_s * in.users(c));
      if (!(a > 0.0)) continue;
      cell.vars.push_back({s, a, state.w(s, c), 0.0, static_cast<double>(in.n_comm)});
      rows[static_cast<std::size_t>(c)].push_back(s);
    }
  }
  SubproblemResult out;
  out.solution = opt::solve(prob, params.sub);
  out.x_hat = Eigen::MatrixXd::Zero(S, C);
  out.slack = Eigen::VectorXd::Zero(C);
  for (int c = 0; c < C; ++c) {
    const auto& r = rows[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < r.size(); ++i)
      out.x_hat(r[i], c) = out.solution.x[static_cast<std::size_t>(c)][i];
    out.slack(c) = out.solution.sigma[static_cast<std::size_t>(c)];
  }
  return out;
}

AllocationMatrix round_allocation(const Eigen::MatrixXd& x_hat, int n_comm) {
  AllocationMatrix X;
  X.x = x_hat.unaryExpr([n_comm](double v) {
              return std::clamp(static_cast<int>(std::round(v)), 0, n_comm);
            })
            .eval();
  return X;
}

AllocationMatrix adjust_allocation(const AllocationMatrix& X0, const Eigen::MatrixXd& x_hat,
                                   const RateInput& in) {
  AllocationMatrix X = X0;
  for (int c = 0; c < in.cells(); ++c) {
    int best = -1;
    double best_rate = 0.0;
    int matched = 0;
    for (int s = 0; s < in.sats(); ++s) {
      if (X.x(s, c) <= 0) continue;
      ++matched;
      const double r = served_rate(in, s, c, X.x(s, c));
      if (best < 0 || r > best_rate) {
        best = s;
        best_rate = r;
      }
    }
    if (matched <= 1) continue;
    for (int s = 0; s < in.sats(); ++s)
      if (s != best) X.x(s, c) = 0;
  }
  repair_budgets(X, x_hat, in);
  return X;
}

AllocationMatrix jmra(const RateInput& in, const SolverParams& params, JmraTelemetry* telemetry) {
  in.validate();
  params.validate();
  const auto t0 = Clock::now();
  const int S = in.sats(), C = in.cells();
  JmraTelemetry tel;
  if (S == 0 || C == 0) {
    if (telemetry) *telemetry = tel;
    AllocationMatrix X;
    X.x = IntMatrix::Zero(S, C);
    return X;
  }

  LagrangianState st;
  st.w = Eigen::MatrixXd::Constant(S, C, static_cast<double>(C) / (in.n_comm * in.beams * S));
  st.lambda = Eigen::VectorXd::Zero(C);
  st.penalty = Eigen::VectorXd::Constant(C, params.p_init);

  Eigen::MatrixXd x_prev;
  Eigen::MatrixXd x_hat;
  for (int it = 0; it < params.n_iter; ++it) {
    SubproblemResult sub = solve_subproblem(st, in, params);
    x_hat = sub.x_hat;
    ++tel.iterations;
    tel.objective_trace.push_back(sub.solution.objective);
    tel.relaxed_objective = sub.solution.utility;
    tel.newton_steps += sub.solution.newton_steps;
    tel.max_gap = std::max(tel.max_gap, sub.solution.gap);

    const Eigen::VectorXd g = (st.w.array() * x_hat.array()).colwise().sum().transpose();
    const bool tight = ((g.array() - 1.0) <= params.theta).all();
    const bool steady =
        x_prev.size() > 0 && ((x_hat - x_prev).cwiseAbs().array() < params.theta).all();
    if (tight && steady) {
      tel.converged = true;
      break;
    }
    st.w = (params.tau + x_hat.array()).inverse().matrix();
    x_prev = x_hat;
    const Eigen::VectorXd gn = (st.w.array() * x_hat.array()).colwise().sum().transpose();
    for (int c = 0; c < C; ++c) {
      const double v = gn(c) - 1.0;
      if (v > params.theta) st.penalty(c) *= params.delta;
      st.lambda(c) = std::max(0.0, st.lambda(c) + st.penalty(c) * v);
    }
  }

  const Eigen::VectorXd g = (st.w.array() * x_hat.array()).colwise().sum().transpose();
  tel.violating_cells = static_cast<int>(((g.array() - 1.0) > params.theta).count());
  tel.x_hat = x_hat;
  AllocationMatrix X = round_allocation(x_hat, in.n_comm);
  for (int c = 0; c < C; ++c)
    if ((X.x.col(c).array() > 0).count() > 1) ++tel.multi_matched_cells;
  X = adjust_allocation(X, x_hat, in);
  tel.final_objective = objective_p1(X, in);
  tel.wall_s = seconds_since(t0);
  if (telemetry) *telemetry = tel;
  return X;
}

AllocationMatrix dmrab(const RateInput& in, const SolverParams& params, DmrabTelemetry* telemetry) {
  in.validate();
  const auto t0 = Clock::now();
  const int S = in.sats(), C = in.cells();
  DmrabTelemetry tel;
  std::vector<int> match(static_cast<std::size_t>(C), -1);
  for (int c = 0; c < C; ++c) {
    double best = 0.0;
    for (int s = 0; s < S; ++s)
      if (in.rho(s, c) > best) {
        best = in.rho(s, c);
        match[static_cast<std::size_t>(c)] = s;
      }
  }

  Eigen::MatrixXd x_hat = Eigen::MatrixXd::Zero(S, C);
  for (int s = 0; s < S; ++s) {
    opt::Problem prob;
    prob.n_sats = 1;
    prob.cap = {static_cast<double>(in.budget())};
    std::vector<int> cols;
    bool infeasible = false;
    for (int c = 0; c < C; ++c) {
      if (match[static_cast<std::size_t>(c)] != s) continue;
      const double scale = in.rho(s, c) / (in.frame_s * in.users(c));
      opt::CellTerm cell;
      cell.weight = in.users(c);
      cell.offset = 1.0 - in.handover(s, c) * scale;
      const double a = in.ofdma_s * scale;
      const double lo = cell.offset > 0.0 ? 0.0 : -cell.offset / a;
      if (!(lo < in.n_comm)) infeasible = true;
      cell.vars.push_back({0, a, 0.0, lo, static_cast<double>(in.n_comm)});
      prob.cells.push_back(cell);
      cols.push_back(c);
    }
    if (cols.empty()) continue;
    if (!infeasible) {
      try {
        const opt::Solution sol = opt::solve(prob, params.sub);
        for (std::size_t i = 0; i < cols.size(); ++i) x_hat(s, cols[i]) = sol.x[i][0];
      } catch (const opt::InfeasibleError&) {
        infeasible = true;
      }
    }
    if (infeasible) {
      tel.feasible = false;
      tel.infeasible_sats.push_back(in.sat_ids[static_cast<std::size_t>(s)]);
    }
  }

  AllocationMatrix X = round_allocation(x_hat, in.n_comm);
  repair_budgets(X, x_hat, in);
  tel.final_objective = objective_p1(X, in);
  tel.wall_s = seconds_since(t0);
  if (telemetry) *telemetry = tel;
  return X;
}

BruteForceResult brute_force_p1(const RateInput& in, double cap) {
  in.validate();
  const int S = in.sats(), C = in.cells();
  double bound = 1.0;
  std::vector<std::vector<int>> options(static_cast<std::size_t>(C));
  for (int c = 0; c < C; ++c) {
    for (int s = 0; s < S; ++s)
      if (in.rho(s, c) > 0.0) options[static_cast<std::size_t>(c)].push_back(s);
    bound *= 1.0 + static_cast<double>(options[static_cast<std::size_t>(c)].size()) * in.n_comm;
  }
  if (bound > cap)
    throw TooLargeError("brute force bound " + std::to_string(bound) + " exceeds cap " +
                            std::to_string(cap),
                        bound);

  BruteForceResult best;
  best.x.x = IntMatrix::Zero(S, C);
  best.objective = -std::numeric_limits<double>::infinity();
  AllocationMatrix cur;
  cur.x = IntMatrix::Zero(S, C);
  std::vector<int> remaining(static_cast<std::size_t>(S), in.budget());

  std::function<void(int, double)> dfs = [&](int c, double acc) {
    if (c == C) {
      ++best.evaluated;
      if (acc > best.objective) {
        best.objective = acc;
        best.x = cur;
      }
      return;
    }
    dfs(c + 1, acc);  // cell left unserved
    for (int s : options[static_cast<std::size_t>(c)]) {
      auto& rem = remaining[static_cast<std::size_t>(s)];
      for (int x = 1; x <= std::min(in.n_comm, rem); ++x) {
        const double r = std::max(0.0, served_rate(in, s, c, x));
        cur.x(s, c) = x;
        rem -= x;
        dfs(c + 1, acc + in.users(c) * std::log1p(r));
        rem += x;
      }
      cur.x(s, c) = 0;
    }
  };
  dfs(0, 0.0);
  return best;
}

}  // namespace leo::alloc
