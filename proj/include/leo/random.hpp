#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace leo {

/// 64-bit FNV-1a; used for stream labels and the config digest.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

std::uint64_t splitmix64(std::uint64_t x);

/// Derives an independent 64-bit seed from a master seed, a fixed label and
/// an optional list of integer coordinates (frame, satellite, cell, ...).
std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::initializer_list<std::uint64_t> coords = {});

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t master, std::string_view label,
                    std::initializer_list<std::uint64_t> coords = {}) {
  return Rng(derive_seed(master, label, coords));
}

}  // namespace leo
