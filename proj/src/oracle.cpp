#include "leo/oracle.hpp"

#include <random>

namespace leo::oracle {

alloc::RateInput random_instance(const ToySpec& spec, Rng& rng) {
  std::uniform_int_distribution<int> n_cells(spec.min_cells, spec.max_cells);
  std::uniform_int_distribution<int> n_users(1, spec.max_users);
  std::uniform_real_distribution<double> rate(spec.rate_min_bps, spec.rate_max_bps);
  std::bernoulli_distribution linked(spec.link_probability);
  const int C = n_cells(rng), S = spec.sats;
  alloc::RateInput in;
  for (int s = 0; s < S; ++s) in.sat_ids.push_back(s);
  for (int c = 0; c < C; ++c) in.cell_ids.push_back(c);
  in.users.resize(C);
  for (int c = 0; c < C; ++c) in.users(c) = n_users(rng);
  in.rho = Eigen::MatrixXd::Zero(S, C);
  for (int c = 0; c < C; ++c)
    for (int s = 0; s < S; ++s)
      if (linked(rng)) in.rho(s, c) = rate(rng);
  in.handover = Eigen::MatrixXd::Constant(S, C, spec.handover_s);
  in.n_comm = spec.n_comm;
  in.beams = spec.beams;
  in.ofdma_s = spec.ofdma_s;
  in.frame_s = spec.frame_s;
  return in;
}

Comparison compare(const alloc::RateInput& in, const alloc::SolverParams& params) {
  Comparison out;
  out.brute = alloc::brute_force_p1(in).objective;
  alloc::JmraTelemetry jt;
  out.jmra = alloc::objective_p1(alloc::jmra(in, params, &jt), in);
  out.jmra_converged = jt.converged;
  alloc::DmrabTelemetry dt;
  out.dmrab = alloc::objective_p1(alloc::dmrab(in, params, &dt), in);
  out.dmrab_feasible = dt.feasible;
  return out;
}

}  // namespace leo::oracle
