// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher.
#include <immintrin.h>

#include <algorithm>
#include <cassert>

#include "leo/simd/kernels.hpp"

namespace leo::simd::avx2 {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

}  // namespace

PilotStats pilot_stats(std::span<const double> y_re, std::span<const double> y_im,
                       std::span<const double> m_re, std::span<const double> m_im) {
  assert(y_re.size() == y_im.size() && y_re.size() == m_re.size() && y_re.size() == m_im.size());
  const std::size_t n = y_re.size();
  __m256d acc_ym0 = _mm256_setzero_pd(), acc_ym1 = _mm256_setzero_pd();
  __m256d acc_e0 = _mm256_setzero_pd(), acc_e1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d yr0 = _mm256_loadu_pd(y_re.data() + i);
    const __m256d yi0 = _mm256_loadu_pd(y_im.data() + i);
    const __m256d yr1 = _mm256_loadu_pd(y_re.data() + i + 4);
    const __m256d yi1 = _mm256_loadu_pd(y_im.data() + i + 4);
    acc_ym0 = _mm256_fmadd_pd(yr0, _mm256_loadu_pd(m_re.data() + i), acc_ym0);
    acc_ym0 = _mm256_fmadd_pd(yi0, _mm256_loadu_pd(m_im.data() + i), acc_ym0);
    acc_ym1 = _mm256_fmadd_pd(yr1, _mm256_loadu_pd(m_re.data() + i + 4), acc_ym1);
    acc_ym1 = _mm256_fmadd_pd(yi1, _mm256_loadu_pd(m_im.data() + i + 4), acc_ym1);
    acc_e0 = _mm256_fmadd_pd(yr0, yr0, acc_e0);
    acc_e0 = _mm256_fmadd_pd(yi0, yi0, acc_e0);
    acc_e1 = _mm256_fmadd_pd(yr1, yr1, acc_e1);
    acc_e1 = _mm256_fmadd_pd(yi1, yi1, acc_e1);
  }
  PilotStats s;
  s.sum_re_ym = hsum(_mm256_add_pd(acc_ym0, acc_ym1));
  s.sum_abs2 = hsum(_mm256_add_pd(acc_e0, acc_e1));
  for (; i < n; ++i) {
    s.sum_re_ym += y_re[i] * m_re[i] + y_im[i] * m_im[i];
    s.sum_abs2 += y_re[i] * y_re[i] + y_im[i] * y_im[i];
  }
  return s;
}

double max_distance_sq(const double origin[3], std::span<const double> x,
                       std::span<const double> y, std::span<const double> z) {
  const std::size_t n = x.size();
  const __m256d ox = _mm256_set1_pd(origin[0]);
  const __m256d oy = _mm256_set1_pd(origin[1]);
  const __m256d oz = _mm256_set1_pd(origin[2]);
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), ox);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y.data() + i), oy);
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(z.data() + i), oz);
    __m256d d2 = _mm256_mul_pd(dx, dx);
    d2 = _mm256_fmadd_pd(dy, dy, d2);
    d2 = _mm256_fmadd_pd(dz, dz, d2);
    best = _mm256_max_pd(best, d2);
  }
  double out = hmax(best);
  for (; i < n; ++i) {
    const double dx = x[i] - origin[0];
    const double dy = y[i] - origin[1];
    const double dz = z[i] - origin[2];
    out = std::max(out, dx * dx + dy * dy + dz * dz);
  }
  return out;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d yv = _mm256_loadu_pd(y.data() + i);
    _mm256_storeu_pd(y.data() + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x.data() + i), yv));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x.data() + i + 4), _mm256_loadu_pd(y.data() + i + 4),
                           acc1);
  }
  double out = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) out += x[i] * y[i];
  return out;
}

}  // namespace leo::simd::avx2
