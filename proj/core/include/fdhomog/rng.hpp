#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace fdhomog {

struct RngSeed {
  std::uint64_t value = 0;

  friend auto operator<=>(const RngSeed&, const RngSeed&) = default;
};

using Engine = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Child seed for substream `stream` of `base`. Distinct streams give
/// statistically independent engines; the mapping is a pure function.
RngSeed derive_seed(RngSeed base, std::uint64_t stream) noexcept;

/// Nested derivation: derive_seed(base, {a, b}) == derive_seed(derive_seed(base, a), b).
RngSeed derive_seed(RngSeed base, std::initializer_list<std::uint64_t> path) noexcept;

Engine make_engine(RngSeed seed);

}  // namespace fdhomog
