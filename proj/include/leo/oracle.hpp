#pragma once

#include <cstdint>
#include <vector>

#include "leo/alloc.hpp"
#include "leo/random.hpp"

namespace leo::oracle {

/// Shape of the random toy instances used to cross-check the allocators
/// against exhaustive enumeration.
struct ToySpec {
  int sats{2};
  int min_cells{3};
  int max_cells{4};
  int n_comm{4};
  int beams{1};
  double ofdma_s{0.01};
  double frame_s{0.04};
  double handover_s{0.0};
  double rate_min_bps{20e6};
  double rate_max_bps{600e6};
  double link_probability{0.85};  // chance that a pair has a usable link
  int max_users{100};
};

alloc::RateInput random_instance(const ToySpec& spec, Rng& rng);

struct Comparison {
  double brute{0.0};
  double jmra{0.0};
  double dmrab{0.0};
  bool dmrab_feasible{true};
  bool jmra_converged{false};
};

Comparison compare(const alloc::RateInput& in, const alloc::SolverParams& params);

}  // namespace leo::oracle
