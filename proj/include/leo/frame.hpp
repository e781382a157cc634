#pragma once

namespace leo::frame {

/// Partition of one system frame into OFDMA frames.
struct FrameBudget {
  double ofdma_s{0.01};  // T
  double frame_s{10.0};  // T_F
  int n_total{0};        // N_T
  int n_sensing{0};      // N_S
  int n_comm{0};         // N_C
  double handover_s{0.05};
  int n_handover{0};
  int n_rtt{2};
  double ra_routing_in_s{0.0};   // T_RA1
  double ra_solver_s{0.0};       // T_RA2 (filled in from measurements)
  double ra_routing_out_s{0.0};  // T_RA3

  double sensing_s() const { return n_sensing * ofdma_s; }
  double comm_s() const { return n_comm * ofdma_s; }
  double ra_total_s() const { return ra_routing_in_s + ra_solver_s + ra_routing_out_s; }
  /// T_F - T_S - T_HO.
  double ra_budget_s() const;
};


/// Builds the budget from T, T_F, N_S and T_HO. T_F and T_HO must be integer
/// multiples of T; N_C = N_T - N_S must be at least 1.
FrameBudget make_budget(double ofdma_s, double frame_s, int n_sensing, double handover_s,
                        int n_rtt = 2);

/// T * ceil(N_RTT * 2 t_eta / T).
double min_handover_time(double max_prop_s, double ofdma_s, int n_rtt);

/// T_HO (1 - alpha_prev).
inline double handover_penalty(bool served_previously, double handover_s) {
  return served_previously ? 0.0 : handover_s;
}

/// T_RA <= T_F - T_S - T_HO.
bool ra_deadline_check(double ra_total_s, const FrameBudget& budget);

/// Integer ratio a/b when a is a multiple of b within relative 1e-9; -1 otherwise.
long exact_multiple(double a, double b);

}  // namespace leo::frame
