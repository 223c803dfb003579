#include "fdhomog/rng.hpp"

namespace fdhomog {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngSeed derive_seed(RngSeed base, std::uint64_t stream) noexcept {
  // Two rounds so that (base, stream) and (base', stream') collide only by accident.
  return RngSeed{splitmix64(splitmix64(base.value) ^ splitmix64(stream + 0x632be59bd9b4e019ULL))};
}

RngSeed derive_seed(RngSeed base, std::initializer_list<std::uint64_t> path) noexcept {
  RngSeed out = base;
  for (std::uint64_t s : path) out = derive_seed(out, s);
  return out;
}

Engine make_engine(RngSeed seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed.value), static_cast<std::uint32_t>(seed.value >> 32)};
  return Engine(seq);
}

}  // namespace fdhomog
