#pragma once

#include <span>
#include <vector>

namespace leo::kpi {

/// (sum M R)^2 / (sum M * sum M R^2); 0 when every rate is zero.
double jain_index(std::span<const double> rates, std::span<const double> users);

/// Mean over frames of the per-frame sum of per-user cell rates.
double mean_throughput(std::span<const double> per_frame_sums);

/// sum_c M_c R_c / sum_c M_c for one frame.
double per_user_throughput(std::span<const double> rates, std::span<const double> users);

/// sum (t - e)^2 / sum t^2. Throws std::invalid_argument on length mismatch
/// or an all-zero truth.
double nmse(std::span<const double> truth, std::span<const double> estimate);

/// Number of cells whose serving satellite id differs between frames
/// (-1 means unserved, so gaining or losing service counts).
int handover_count(std::span<const int> serving_prev, std::span<const int> serving_now);

inline double handovers_per_second(int count, double frame_s) { return count / frame_s; }

}  // namespace leo::kpi
