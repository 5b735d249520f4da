#pragma once

#include <cstdint>
#include <random>

namespace lorpe {

//! SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

//! Engine for the (seed, stream, substream) counter triple. Streams with
//! different counters are statistically independent and do not depend on
//! scheduling, so parallel replications are reproducible.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0)
{
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
  s = splitmix64(s ^ splitmix64(substream + 0x8cb92ba72f3d8dd7ULL));
  std::seed_seq seq{ static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32) };
  return std::mt19937_64(seq);
}

} // namespace lorpe
