#include <atomic>
#include <cstdlib>
#include <cstring>

#include "leo/simd/kernels.hpp"

namespace leo::simd {

#ifndef LEO_BUILD_AVX2
// Link-time placeholders so the dispatcher compiles on non-x86 builds; never
// selected because avx2_available() is false.
namespace avx2 {
PilotStats pilot_stats(std::span<const double> a, std::span<const double> b,
                       std::span<const double> c, std::span<const double> d) {
  return scalar::pilot_stats(a, b, c, d);
}
double max_distance_sq(const double o[3], std::span<const double> x, std::span<const double> y,
                       std::span<const double> z) {
  return scalar::max_distance_sq(o, x, y, z);
}
void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  scalar::axpy(alpha, x, y);
}
double dot(std::span<const double> x, std::span<const double> y) { return scalar::dot(x, y); }
}  // namespace avx2
#endif

bool avx2_available() {
#if defined(LEO_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

namespace {

Isa detect() {
  if (const char* env = std::getenv("LEO_SIMD"); env != nullptr && std::strcmp(env, "scalar") == 0)
    return Isa::kScalar;
  return avx2_available() ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

Isa active_isa() { return current().load(std::memory_order_relaxed); }

std::string_view isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

void force_isa(Isa isa) {
  if (isa == Isa::kAvx2 && !avx2_available()) isa = Isa::kScalar;
  current().store(isa, std::memory_order_relaxed);
}

PilotStats pilot_stats(std::span<const double> y_re, std::span<const double> y_im,
                       std::span<const double> m_re, std::span<const double> m_im) {
  return active_isa() == Isa::kAvx2 ? avx2::pilot_stats(y_re, y_im, m_re, m_im)
                                    : scalar::pilot_stats(y_re, y_im, m_re, m_im);
}

double max_distance_sq(const double origin[3], std::span<const double> x,
                       std::span<const double> y, std::span<const double> z) {
  return active_isa() == Isa::kAvx2 ? avx2::max_distance_sq(origin, x, y, z)
                                    : scalar::max_distance_sq(origin, x, y, z);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (active_isa() == Isa::kAvx2)
    avx2::axpy(alpha, x, y);
  else
    scalar::axpy(alpha, x, y);
}

double dot(std::span<const double> x, std::span<const double> y) {
  return active_isa() == Isa::kAvx2 ? avx2::dot(x, y) : scalar::dot(x, y);
}

}  // namespace leo::simd
