#include <doctest.h>

#include <cmath>
#include <vector>

#include "dcqrng/bounds.hpp"
#include "dcqrng/detprng.hpp"
#include "dcqrng/poisson.hpp"

using namespace dcqrng;

TEST_CASE("frozen bound values") {
  CHECK(deviation_bound(7, 4) == doctest::Approx(6.839115e-4).epsilon(1e-6));
  CHECK(min_entropy_bound(7, 4) == doctest::Approx(1.9960587).epsilon(1e-8));
  CHECK(invert_bound(1e-3, 4) == doctest::Approx(6.620073).epsilon(1e-6));
  CHECK(invert_bound(1e-3, 16) == doctest::Approx(89.899826).epsilon(1e-6));
  CHECK(invert_bound(1e-3, 256) == doctest::Approx(22922.543).epsilon(1e-6));
}

TEST_CASE("per-byte report") {
  const auto a = per_byte_report(7, 4);
  REQUIRE(a.samples_per_byte);
  CHECK(*a.samples_per_byte == 4u);
  CHECK(*a.min_entropy_per_byte == doctest::Approx(7.984235).epsilon(1e-6));
  CHECK(a.shannon_limit_per_byte == 8.0);

  const auto b = per_byte_report(100, 16);
  CHECK(*b.samples_per_byte == 2u);
  CHECK(*b.min_entropy_per_byte == doctest::Approx(7.978678).epsilon(1e-6));

  CHECK(*per_byte_report(50, 2).samples_per_byte == 8u);
  CHECK(*per_byte_report(30000, 256).samples_per_byte == 1u);
  const auto odd = per_byte_report(50, 8);
  CHECK_FALSE(odd.samples_per_byte);
  CHECK_FALSE(odd.min_entropy_per_byte);
}

TEST_CASE("reference lookups") {
  CHECK(reference_byte_entropy(7, 4) == 7.9682);
  CHECK(reference_byte_entropy(100, 16) == 7.9741);
  CHECK_FALSE(reference_byte_entropy(8, 4));
  CHECK(reference_mean_row(16)->exact_mu == 91.57);
  CHECK_FALSE(reference_mean_row(128));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(deviation_bound(0, 4), std::domain_error);
  CHECK_THROWS_AS(deviation_bound(7, 1), std::domain_error);
  CHECK_THROWS_AS(min_entropy_bound(-1, 4), std::domain_error);
  CHECK_THROWS_AS(invert_bound(0, 4), std::domain_error);
  CHECK_THROWS_AS(invert_bound(0.8, 4), std::domain_error);
  CHECK(invert_bound(0.75, 4) == 0.0);
}

TEST_CASE("property: monotone in mu, bounded by the trivial limits") {
  for (std::uint32_t m : {2u, 3u, 4u, 10u, 16u, 64u, 256u}) {
    double prev_dev = 1.0, prev_h = 0.0;
    for (double mu = 0.25; mu < 5e4; mu *= 1.7) {
      const double d = deviation_bound(mu, m);
      const double h = min_entropy_bound(mu, m);
      CHECK((d < prev_dev || d == 0.0));
      CHECK(h >= prev_h);
      CHECK(d <= (m - 1.0) / m);
      CHECK(h <= std::log2(m) + 1e-15);
      CHECK(h > 0.0);
      prev_dev = d;
      prev_h = h;
    }
  }
}

TEST_CASE("property: inversion round-trips") {
  auto g = GeneratorState::seed(std::vector<std::uint8_t>(16, 0x42));
  for (int i = 0; i < 50; ++i) {
    const auto m = static_cast<std::uint32_t>(2 + g.next_int(255));
    const double eps = std::pow(10.0, -1.0 - 8.0 * g.next_unit());
    const double mu = invert_bound(eps, m);
    CAPTURE(m);
    CAPTURE(eps);
    CHECK(deviation_bound(mu, m) == doctest::Approx(eps).epsilon(1e-9));
    CHECK(deviation_bound(mu * 1.001, m) < eps);
  }
}

TEST_CASE("property: the bound dominates the exact deviation") {
  auto g = GeneratorState::seed(std::vector<std::uint8_t>(16, 0x43));
  for (int i = 0; i < 60; ++i) {
    const auto m = static_cast<std::uint32_t>(2 + g.next_int(63));
    const double mu = 0.1 + 500.0 * g.next_unit();
    const double exact = max_uniform_deviation(exact_residue_distribution(mu, m));
    CAPTURE(m);
    CAPTURE(mu);
    CHECK(exact <= deviation_bound(mu, m) + 1e-12);
  }
}

TEST_CASE("reference rows sit near epsilon = 1e-3") {
  for (const auto& row : kReferenceMeanTable) {
    const double d = deviation_bound(row.exact_mu, row.modulus);
    CAPTURE(row.modulus);
    CHECK(d >= 0.5e-3);
    CHECK(d <= 2e-3);
    CHECK(row.conservative_mu > row.exact_mu);
  }
  CHECK(deviation_bound(6.62, 4) == doctest::Approx(1.0000732e-3).epsilon(1e-6));
}
