#include "leo/frame.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace leo::frame {

long exact_multiple(double a, double b) {
  if (!(b > 0.0) || a < 0.0) return -1;
  const double q = a / b;
  const double r = std::round(q);
  if (std::fabs(q - r) > 1e-9 * std::max(1.0, q)) return -1;
  return static_cast<long>(r);
}

double FrameBudget::ra_budget_s() const { return frame_s - sensing_s() - handover_s; }

FrameBudget make_budget(double ofdma_s, double frame_s, int n_sensing, double handover_s,
                        int n_rtt) {
  if (!(ofdma_s > 0.0)) throw std::invalid_argument("OFDMA frame length must be positive");
  const long nt = exact_multiple(frame_s, ofdma_s);
  if (nt <= 0) throw std::invalid_argument("T_F must be a positive multiple of T");
  const long nho = exact_multiple(handover_s, ofdma_s);
  if (nho < 0) throw std::invalid_argument("T_HO must be a nonnegative multiple of T");
  if (n_sensing < 0) throw std::invalid_argument("N_S must be nonnegative");
  if (n_rtt < 0) throw std::invalid_argument("N_RTT must be nonnegative");
  FrameBudget b;
  b.ofdma_s = ofdma_s;
  b.frame_s = frame_s;
  b.n_total = static_cast<int>(nt);
  b.n_sensing = n_sensing;
  b.n_comm = b.n_total - n_sensing;
  b.handover_s = handover_s;
  b.n_handover = static_cast<int>(nho);
  b.n_rtt = n_rtt;
  if (b.n_comm < 1)
    throw std::invalid_argument("sensing sub-frame (" + std::to_string(n_sensing) +
                                " OFDMA frames) leaves no frame for communication");
  return b;
}

double min_handover_time(double max_prop_s, double ofdma_s, int n_rtt) {
  if (!(ofdma_s > 0.0) || max_prop_s < 0.0 || n_rtt < 0)
    throw std::invalid_argument("invalid handover bound inputs");
  return ofdma_s * std::ceil(n_rtt * 2.0 * max_prop_s / ofdma_s - 1e-9);
}

bool ra_deadline_check(double ra_total_s, const FrameBudget& budget) {
  // Compare with a tolerance far below any clock resolution so that the
  // boundary case holds despite representation error.
  return ra_total_s <= budget.ra_budget_s() + 1e-12;
}

}  // namespace leo::frame
