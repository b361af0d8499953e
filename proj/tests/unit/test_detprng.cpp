#include <doctest.h>

#include <array>
#include <chrono>
#include <cmath>
#include <vector>

#include "dcqrng/analysis.hpp"
#include "dcqrng/detprng.hpp"

using namespace dcqrng;

namespace {

std::vector<std::uint8_t> seed_bytes(std::uint8_t fill, std::size_t n = 32) {
  return std::vector<std::uint8_t>(n, fill);
}

// Straight transcription of the public-domain xoshiro256** step.
struct RefXoshiro {
  std::array<std::uint64_t, 4> s;
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t next() {
    const std::uint64_t result = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }
};

}  // namespace

TEST_CASE("reference step known answer") {
  RefXoshiro r{{1, 2, 3, 4}};
  CHECK(r.next() == 11520u);
  CHECK(r.next() == 0u);
  CHECK(r.next() == 1509978240u);
  CHECK(r.next() == 1215971899390074240u);
}

TEST_CASE("next matches the reference step from any seeded state") {
  auto g = GeneratorState::seed(seed_bytes(0x5a));
  RefXoshiro r{g.words()};
  for (int i = 0; i < 1000; ++i) REQUIRE(g.next() == r.next());
}

TEST_CASE("seed length is enforced") {
  CHECK_THROWS_AS(GeneratorState::seed(seed_bytes(1, 15)), std::invalid_argument);
  CHECK_THROWS_AS(GeneratorState::seed({}), std::invalid_argument);
  CHECK_NOTHROW(GeneratorState::seed(seed_bytes(1, 16)));
  CHECK_NOTHROW(GeneratorState::seed(seed_bytes(1, 17)));
}

TEST_CASE("same seed gives the same stream") {
  auto a = GeneratorState::seed(seed_bytes(7));
  auto b = GeneratorState::seed(seed_bytes(7));
  CHECK(a == b);
  for (int i = 0; i < 100; ++i) REQUIRE(a.next() == b.next());
}

TEST_CASE("every single-bit seed flip changes the stream") {
  const auto base = seed_bytes(0x33, 20);
  auto ref = GeneratorState::seed(base);
  const auto first = ref.next();
  for (std::size_t bit = 0; bit < base.size() * 8; ++bit) {
    auto s = base;
    s[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    auto g = GeneratorState::seed(s);
    REQUIRE(g.words() != GeneratorState::seed(base).words());
    CHECK(g.next() != first);
  }
  // length is part of the material: a trailing zero byte is not a no-op
  auto padded = base;
  padded.push_back(0);
  CHECK(GeneratorState::seed(padded).words() != GeneratorState::seed(base).words());
}

TEST_CASE("call counter") {
  auto g = GeneratorState::seed(seed_bytes(2));
  CHECK(g.call_count() == 0);
  g.next();
  g.next_unit();
  g.advance(10);
  CHECK(g.call_count() == 12);
  g.advance(0);
  CHECK(g.call_count() == 12);
}

TEST_CASE("advance(k) equals k calls to next") {
  for (std::uint64_t k : {0ull, 1ull, 2ull, 17ull, 1000ull}) {
    auto a = GeneratorState::seed(seed_bytes(9));
    auto b = a;
    a.advance(k);
    for (std::uint64_t i = 0; i < k; ++i) b.next();
    CHECK(a == b);
  }
}

TEST_CASE("property: advance composes additively") {
  auto picker = GeneratorState::seed(seed_bytes(0xc0));
  for (int trial = 0; trial < 200; ++trial) {
    const auto i = picker.next_int(5000);
    const auto j = picker.next_int(5000);
    std::vector<std::uint8_t> seed(16 + picker.next_int(16));
    for (auto& b : seed) b = static_cast<std::uint8_t>(picker.next());
    auto a = GeneratorState::seed(seed);
    auto b = a;
    a.advance(i);
    a.advance(j);
    b.advance(i + j);
    REQUIRE(a.words() == b.words());
  }
}

TEST_CASE("capped advance") {
  auto base = GeneratorState::seed(seed_bytes(4));

  SUBCASE("below or at the cap it is a plain advance") {
    for (std::uint64_t k : {0ull, 5ull, 64ull}) {
      auto a = base, b = base;
      CHECK_FALSE(a.advance_capped(k, 64));
      b.advance(k);
      CHECK(a == b);
    }
  }
  SUBCASE("above the cap it folds and stays deterministic") {
    auto a = base, b = base, c = base;
    CHECK(a.advance_capped(1000, 64));
    CHECK(b.advance_capped(1000, 64));
    CHECK(a == b);
    c.advance_capped(1001, 64);
    CHECK(c.words() != a.words());
    // k % cap plain steps plus one step after the fold
    CHECK(a.call_count() == 1000 % 64 + 1);
  }
  SUBCASE("a huge count completes quickly") {
    auto a = base;
    const auto t0 = std::chrono::steady_clock::now();
    CHECK(a.advance_capped(std::uint64_t{1} << 62, kDefaultAdvanceCap));
    CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(1));
  }
}

TEST_CASE("next_int edge cases") {
  auto g = GeneratorState::seed(seed_bytes(5));
  CHECK_THROWS_AS(g.next_int(0), std::invalid_argument);
  for (int i = 0; i < 1000; ++i) REQUIRE(g.next_int(1) == 0u);
  for (int i = 0; i < 1000; ++i) REQUIRE(g.next_int(3) < 3u);
  const std::uint64_t big = (std::uint64_t{1} << 63) + 12345;
  for (int i = 0; i < 1000; ++i) REQUIRE(g.next_int(big) < big);
}

TEST_CASE("next_int(6) faces are uniform") {
  auto g = GeneratorState::seed(seed_bytes(6));
  constexpr int n = 600000;
  std::array<int, 6> counts{};
  for (int i = 0; i < n; ++i) ++counts[g.next_int(6)];
  double chi = 0.0;
  for (int c : counts) {
    CHECK(std::abs(c - n / 6.0) < 0.01 * n / 6.0);
    chi += (c - n / 6.0) * (c - n / 6.0) / (n / 6.0);
  }
  CHECK(chi < 20.515);  // chi-square(5), alpha = 0.001
}

TEST_CASE("property: next_int chi-square for assorted bounds") {
  auto g = GeneratorState::seed(seed_bytes(0x1d));
  for (std::uint64_t bound : {2ull, 3ull, 4ull, 7ull, 10ull, 37ull, 100ull}) {
    const std::size_t n = 2000 * bound;
    std::vector<std::uint64_t> counts(bound);
    for (std::size_t i = 0; i < n; ++i) ++counts[g.next_int(bound)];
    const double e = static_cast<double>(n) / bound;
    double chi = 0.0;
    for (auto c : counts) chi += (c - e) * (c - e) / e;
    // Wilson-Hilferty 0.999 point, computed here independently
    const double k = static_cast<double>(bound - 1);
    const double crit = k * std::pow(1 - 2 / (9 * k) + 3.090232 * std::sqrt(2 / (9 * k)), 3);
    CAPTURE(bound);
    CHECK(chi < crit);
  }
}

TEST_CASE("next_unit range and byte entropy of raw output") {
  auto g = GeneratorState::seed(seed_bytes(8));
  for (int i = 0; i < 10000; ++i) {
    const double u = g.next_unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  std::vector<std::uint8_t> bytes(1000000);
  for (std::size_t i = 0; i < bytes.size(); i += 8) {
    const auto w = g.next();
    for (int b = 0; b < 8; ++b) bytes[i + b] = static_cast<std::uint8_t>(w >> (8 * b));
  }
  CHECK(shannon_entropy(bytes) > 7.99);
  CHECK(chi_square_uniform(bytes).pass);
}

TEST_CASE("advance of a million steps is fast") {
  auto g = GeneratorState::seed(seed_bytes(3));
  const auto t0 = std::chrono::steady_clock::now();
  g.advance(1000000);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
  CHECK(ms.count() < 50);
  CHECK(g.call_count() == 1000000u);
}
