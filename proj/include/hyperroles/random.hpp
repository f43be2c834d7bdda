#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace hyperroles {

/// Identifier written to run metadata so other implementations can replay
/// the exact label permutations.
inline constexpr std::string_view kRngAlgorithm =
    "mt19937_64;seed_seq(seed_lo32,seed_hi32,stream_lo32,stream_hi32);lemire-bounded;fisher-yates-descending";

using Rng = std::mt19937_64;

/// Independent stream for (seed, stream index), e.g. one per shuffle replica.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

/// Uniform integer in [0, bound) by Lemire's multiply-and-reject method.
inline std::uint64_t bounded(Rng& rng, std::uint64_t bound) {
  __extension__ using u128 = unsigned __int128;
  u128 m = static_cast<u128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(bounded(rng, i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace hyperroles
