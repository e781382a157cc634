#include "leo/simd/kernels.hpp"

#include <algorithm>
#include <cassert>

namespace leo::simd::scalar {

PilotStats pilot_stats(std::span<const double> y_re, std::span<const double> y_im,
                       std::span<const double> m_re, std::span<const double> m_im) {
  assert(y_re.size() == y_im.size() && y_re.size() == m_re.size() && y_re.size() == m_im.size());
  PilotStats s;
  for (std::size_t i = 0; i < y_re.size(); ++i) {
    // Re{conj(y) * m} = y_re*m_re + y_im*m_im
    s.sum_re_ym += y_re[i] * m_re[i] + y_im[i] * m_im[i];
    s.sum_abs2 += y_re[i] * y_re[i] + y_im[i] * y_im[i];
  }
  return s;
}

double max_distance_sq(const double origin[3], std::span<const double> x,
                       std::span<const double> y, std::span<const double> z) {
  double best = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - origin[0];
    const double dy = y[i] - origin[1];
    const double dz = z[i] - origin[2];
    best = std::max(best, dx * dx + dy * dy + dz * dz);
  }
  return best;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

}  // namespace leo::simd::scalar
