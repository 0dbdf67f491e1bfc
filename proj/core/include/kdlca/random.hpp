// SPDX-License-Identifier: Apache-2.0
//
// Seed plumbing. One root seed fans out into named sub-seeds through a
// splitmix64 finalizer over (root XOR fnv1a(label)), so every consumer gets an
// independent yet reproducible stream.
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace kdlca {

__extension__ using uint128 = unsigned __int128;

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t fnv1a64(std::string_view text) noexcept;
std::uint64_t derive_seed(std::uint64_t root, std::string_view label) noexcept;

/// Uniform index in [0, n) from one engine draw via a 128-bit multiply-high.
/// Fully specified, unlike std::uniform_int_distribution.
inline std::size_t draw_index(std::mt19937_64& engine, std::size_t n) noexcept {
  const auto r = static_cast<uint128>(engine());
  return static_cast<std::size_t>((r * n) >> 64);
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double draw_unit(std::mt19937_64& engine) noexcept {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace kdlca
