#include "leo/kpi.hpp"

#include <stdexcept>

namespace leo::kpi {

double jain_index(std::span<const double> rates, std::span<const double> users) {
  if (rates.size() != users.size()) throw std::invalid_argument("rates/users length mismatch");
  double s1 = 0.0, s2 = 0.0, m = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    s1 += users[i] * rates[i];
    s2 += users[i] * rates[i] * rates[i];
    m += users[i];
  }
  if (!(m > 0.0)) throw std::invalid_argument("Jain index needs at least one user");
  if (!(s2 > 0.0)) return 0.0;
  return s1 * s1 / (m * s2);
}

double mean_throughput(std::span<const double> per_frame_sums) {
  if (per_frame_sums.empty()) throw std::invalid_argument("need at least one frame");
  double s = 0.0;
  for (double v : per_frame_sums) s += v;
  return s / static_cast<double>(per_frame_sums.size());
}

double per_user_throughput(std::span<const double> rates, std::span<const double> users) {
  if (rates.size() != users.size()) throw std::invalid_argument("rates/users length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    num += users[i] * rates[i];
    den += users[i];
  }
  return den > 0.0 ? num / den : 0.0;
}

double nmse(std::span<const double> truth, std::span<const double> estimate) {
  if (truth.size() != estimate.size()) throw std::invalid_argument("nmse length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = truth[i] - estimate[i];
    num += d * d;
    den += truth[i] * truth[i];
  }
  if (!(den > 0.0)) throw std::invalid_argument("nmse undefined for all-zero truth");
  return num / den;
}

int handover_count(std::span<const int> serving_prev, std::span<const int> serving_now) {
  if (serving_prev.size() != serving_now.size())
    throw std::invalid_argument("serving vectors length mismatch");
  int n = 0;
  for (std::size_t i = 0; i < serving_now.size(); ++i)
    if (serving_prev[i] != serving_now[i]) ++n;
  return n;
}

}  // namespace leo::kpi
