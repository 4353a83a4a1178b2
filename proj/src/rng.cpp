#include "sesample/rng.hpp"

namespace sesample {

std::uint64_t derive_key(std::uint64_t seed, std::string_view purpose,
                         std::initializer_list<std::uint64_t> coords) {
  std::uint64_t h = mix64(seed ^ 0x5e5a3b1e0d15ea5eULL);
  h = mix64(h ^ fnv1a(purpose));
  for (std::uint64_t c : coords) {
    h = mix64(h + 0x9e3779b97f4a7c15ULL + mix64(c));
  }
  return h;
}

std::uint64_t Rng::below(std::uint64_t bound) noexcept {
  // 128-bit multiply-shift, rejecting the biased low region.
  unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace sesample
