#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace dcqrng {

inline constexpr std::size_t kMinSeedBytes = 16;
inline constexpr std::uint64_t kDefaultAdvanceCap = std::uint64_t{1} << 24;

// splitmix64 finalizer step; also used for seed widening.
constexpr std::uint64_t splitmix64(std::uint64_t& x) noexcept {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic advanceable generator (xoshiro256**) with a call counter.
///
/// This is the entropy container the permutation engine perturbs: every
/// output and every advance is a pure function of the seed and the sequence
/// of calls made on it. Not thread-safe; move it between threads, never share.
class GeneratorState {
 public:
  /// Throws std::invalid_argument when fewer than kMinSeedBytes are given.
  static GeneratorState seed(std::span<const std::uint8_t> material);

  std::uint64_t next() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    ++calls_;
    return result;
  }

  // Same state as k next() calls with outputs discarded.
  void advance(std::uint64_t k) noexcept {
    for (std::uint64_t i = 0; i < k; ++i) next();
  }

  /// Advance by k steps, but never iterate more than `cap` steps at once.
  ///
  /// When k > cap the generator advances by k % cap and the quotient k / cap
  /// is mixed into the state with one extra perturbation step. Returns true
  /// when that fold happened.
  bool advance_capped(std::uint64_t k, std::uint64_t cap) noexcept;

  /// Uniform integer in [0, bound) by multiply-and-reject (no modulo bias).
  /// Throws std::invalid_argument for bound == 0.
  std::uint64_t next_int(std::uint64_t bound);

  // Uniform double in [0, 1) with 53 bits of precision.
  double next_unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t call_count() const noexcept { return calls_; }
  const std::array<std::uint64_t, 4>& words() const noexcept { return s_; }

  friend bool operator==(const GeneratorState&, const GeneratorState&) = default;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
  std::uint64_t calls_ = 0;
};

}  // namespace dcqrng
