#pragma once

// Data-parallel inner loops shared by the pilot estimator and the geometry/solver code.
//
// Every kernel has a scalar reference implementation (namespace scalar) and,
// on x86-64 builds, an AVX2/FMA variant (namespace avx2). The free functions
// in namespace leo::simd dispatch at runtime to the widest variant the CPU
// supports. Variants agree with the reference up to floating-point
// reassociation of the reductions; tests/test_simd.cpp pins that down.

#include <cstddef>
#include <span>
#include <string_view>

namespace leo::simd {

/// Sufficient statistics of a known-pilot block: sum of Re{y_i^* m_i} and
/// sum of |y_i|^2.
struct PilotStats {
  double sum_re_ym{0.0};
  double sum_abs2{0.0};
};

enum class Isa { kScalar, kAvx2 };

namespace scalar {
PilotStats pilot_stats(std::span<const double> y_re, std::span<const double> y_im,
                       std::span<const double> m_re, std::span<const double> m_im);
double max_distance_sq(const double origin[3], std::span<const double> x,
                       std::span<const double> y, std::span<const double> z);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
}  // namespace scalar

namespace avx2 {
PilotStats pilot_stats(std::span<const double> y_re, std::span<const double> y_im,
                       std::span<const double> m_re, std::span<const double> m_im);
double max_distance_sq(const double origin[3], std::span<const double> x,
                       std::span<const double> y, std::span<const double> z);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
}  // namespace avx2

/// True when the AVX2 variants were compiled in and the CPU reports AVX2+FMA.
bool avx2_available();

/// ISA used by the dispatching entry points. Chosen once; the environment
/// variable LEO_SIMD=scalar forces the reference path.
Isa active_isa();
std::string_view isa_name(Isa isa);

/// Overrides the dispatch choice (tests and benchmarking). Requesting an ISA
/// that is not available falls back to scalar.
void force_isa(Isa isa);

PilotStats pilot_stats(std::span<const double> y_re, std::span<const double> y_im,
                       std::span<const double> m_re, std::span<const double> m_im);
double max_distance_sq(const double origin[3], std::span<const double> x,
                       std::span<const double> y, std::span<const double> z);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);

}  // namespace leo::simd
