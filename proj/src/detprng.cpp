#include "dcqrng/detprng.hpp"

#include <string>

namespace dcqrng {

namespace {

__extension__ using u128 = unsigned __int128;

// Distinct per-lane starting points so each 64-bit lane is a different
// function of the whole seed.
constexpr std::array<std::uint64_t, 4> kLaneInit = {
    0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL,
    0xa4093822299f31d0ULL, 0x082efa98ec4e6c89ULL};

std::uint64_t load_le(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint64_t w = 0;
  for (std::size_t b = 0; b < 8 && offset + b < bytes.size(); ++b) {
    w |= std::uint64_t{bytes[offset + b]} << (8 * b);
  }
  return w;
}

}  // namespace

GeneratorState GeneratorState::seed(std::span<const std::uint8_t> material) {
  if (material.size() < kMinSeedBytes) {
    throw std::invalid_argument("seed material must be at least " +
                                std::to_string(kMinSeedBytes) + " bytes, got " +
                                std::to_string(material.size()));
  }
  GeneratorState g;
  for (std::size_t lane = 0; lane < 4; ++lane) {
    std::uint64_t h = kLaneInit[lane] ^ material.size();
    for (std::size_t off = 0; off < material.size(); off += 8) {
      h ^= load_le(material, off);
      h = splitmix64(h);
    }
    // one more round so the last word is diffused into every bit
    g.s_[lane] = splitmix64(h);
  }
  if ((g.s_[0] | g.s_[1] | g.s_[2] | g.s_[3]) == 0) g.s_[0] = 0x9e3779b97f4a7c15ULL;
  return g;
}

bool GeneratorState::advance_capped(std::uint64_t k, std::uint64_t cap) noexcept {
  if (cap == 0 || k <= cap) {
    advance(k);
    return false;
  }
  advance(k % cap);
  std::uint64_t q = k / cap;
  s_[0] ^= splitmix64(q);
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9e3779b97f4a7c15ULL;
  next();
  return true;
}

std::uint64_t GeneratorState::next_int(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("next_int: bound must be >= 1");
  // Lemire's multiply-shift with rejection of the short first interval.
  u128 m = static_cast<u128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace dcqrng
