#include "sleuth/rng.hpp"

namespace sleuth {

namespace {
__extension__ typedef unsigned __int128 u128;
}

std::size_t Rng::index(std::size_t n) {
  const auto bound = static_cast<std::uint64_t>(n);
  u128 m = static_cast<u128>(engine_()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>(engine_()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

}  // namespace sleuth
