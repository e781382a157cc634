#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace leo::opt {

/// Separable-by-cell concave program solved by a primal log-barrier method:
///
///   maximize  sum_c M_c log(b_c + sum_j a_j x_j) - sum_c pen_c(g_c + sigma_c)
///   s.t.      lo_j <= x_j <= hi_j
///             sum_{j on satellite s} x_j <= cap_s
///             -1 <= sigma_c <= 0          (penalized cells only)
///
/// with g_c = sum_j w_j x_j and pen(z) = p/2 z^2 + lambda z.
struct Var {
  int sat{0};  // budget group, 0 .. n_sats-1
  double a{0.0};
  double w{0.0};
  double lo{0.0};
  double hi{0.0};
};

struct CellTerm {
  double weight{1.0};  // M_c
  double offset{1.0};  // b_c
  bool penalized{false};
  double p{0.0};
  double lambda{0.0};
  std::vector<Var> vars;
};

struct Problem {
  int n_sats{0};
  std::vector<double> cap;  // per satellite
  std::vector<CellTerm> cells;
};

struct Options {
  double gap_tol{1e-9};    // stop when m/t <= gap_tol * (1 + |F|)
  double t_growth{20.0};
  double t_init{0.0};      // 0: chosen from the problem scale
  int max_newton{80};      // per centering step
  int max_outer{60};
};

struct Solution {
  std::vector<std::vector<double>> x;  // per cell, per var
  std::vector<double> sigma;           // per cell (0 when not penalized)
  double objective{0.0};               // full objective including penalties
  double utility{0.0};                 // sum_c M_c log(...)
  double gap{0.0};                     // final duality-gap bound m/t
  double decrement{0.0};               // last Newton decrement (squared / 2)
  int newton_steps{0};
  int centering_steps{0};
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double gap, double decrement)
      : std::runtime_error(what), gap_(gap), decrement_(decrement) {}
  double gap() const { return gap_; }
  double decrement() const { return decrement_; }

 private:
  double gap_;
  double decrement_;
};

/// The feasible set has empty interior (for instance a lower bound above the
/// upper bound, or lower bounds exhausting a satellite budget).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Objective value at an arbitrary point (no feasibility check beyond the
/// log domain; returns -inf outside it).
double evaluate(const Problem& prob, const std::vector<std::vector<double>>& x,
                const std::vector<double>& sigma, double* utility = nullptr);

Solution solve(const Problem& prob, const Options& opts = {});

}  // namespace leo::opt
