#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "dcqrng/analysis.hpp"
#include "dcqrng/bounds.hpp"
#include "dcqrng/poisson.hpp"

using namespace dcqrng;

namespace {

double pmf_by_product(double mu, unsigned n) {
  long double p = std::exp(-static_cast<long double>(mu));
  for (unsigned i = 1; i <= n; ++i) p *= mu / i;
  return static_cast<double>(p);
}

// P(N mod M = k) from the characteristic function:
//   (1/M) * sum_j exp(mu (w^j - 1)) w^(-jk),  w = exp(2 pi i / M)
std::vector<double> residues_by_dft(double mu, unsigned m) {
  using cplx = std::complex<long double>;
  const long double two_pi = 2 * std::numbers::pi_v<long double>;
  std::vector<double> out(m);
  for (unsigned k = 0; k < m; ++k) {
    cplx acc = 0;
    for (unsigned j = 0; j < m; ++j) {
      const long double th = two_pi * j / m;
      const cplx phi = std::exp(static_cast<long double>(mu) * (cplx(std::cos(th), std::sin(th)) - 1.0L));
      acc += phi * std::polar(1.0L, -th * k);
    }
    out[k] = static_cast<double>(acc.real() / m);
  }
  return out;
}

}  // namespace

TEST_CASE("pmf against a direct product") {
  CHECK(poisson_pmf(7, 0) == doctest::Approx(std::exp(-7.0)).epsilon(1e-13));
  CHECK(poisson_pmf(7, 7) == doctest::Approx(0.149003).epsilon(1e-5));
  for (double mu : {0.5, 7.0, 30.0, 100.0}) {
    for (unsigned n : {0u, 1u, 5u, 40u, 120u}) {
      CAPTURE(mu);
      CAPTURE(n);
      CHECK(poisson_pmf(mu, n) == doctest::Approx(pmf_by_product(mu, n)).epsilon(1e-11));
    }
  }
  CHECK(poisson_log_pmf(100, 100) == doctest::Approx(std::log(pmf_by_product(100, 100))).epsilon(1e-12));
}

TEST_CASE("pmf rejects bad means") {
  CHECK_THROWS_AS(poisson_pmf(0, 1), std::domain_error);
  CHECK_THROWS_AS(poisson_pmf(-3, 1), std::domain_error);
  CHECK_THROWS_AS(poisson_pmf(std::nan(""), 1), std::domain_error);
  CHECK_THROWS_AS(PoissonSpec(0.0), std::domain_error);
  CHECK_THROWS_AS(PoissonSpec(2e5), std::domain_error);
}

TEST_CASE("pmf sums to one") {
  long double s = 0;
  for (unsigned n = 0; n < 400; ++n) s += poisson_pmf(100, n);
  CHECK(static_cast<double>(s) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("property: cdf table invariants") {
  for (double mu : {0.01, 0.3, 1.0, 7.0, 42.5, 100.0, 200.0, 6.62, 1e3, 22950.0, 1e5}) {
    CAPTURE(mu);
    const PoissonSpec spec(mu);
    const auto cdf = spec.cdf();
    REQUIRE(!cdf.empty());
    CHECK(cdf.back() == 1.0);
    for (std::size_t i = 1; i < cdf.size(); ++i) REQUIRE(cdf[i] > cdf[i - 1]);
    CHECK(cdf.front() > 0.0);
    CHECK(spec.last() == spec.first() + cdf.size() - 1);
    CHECK(spec.first() <= static_cast<std::uint64_t>(mu));
    CHECK(spec.last() >= static_cast<std::uint64_t>(mu));
    // entries track the true cdf
    long double below_first = 0;
    for (std::uint64_t n = 0; n < spec.first(); ++n) below_first += poisson_pmf(mu, n);
    CHECK(below_first < 1e-14);
    const std::size_t mid = static_cast<std::size_t>(std::floor(mu)) - spec.first();
    long double c = below_first;
    for (std::uint64_t n = spec.first(); n <= spec.first() + mid; ++n) c += poisson_pmf(mu, n);
    CHECK(cdf[mid] == doctest::Approx(static_cast<double>(c)).epsilon(1e-10));
  }
}

TEST_CASE("quantile edges") {
  const PoissonSpec spec(7);
  CHECK(spec.first() == 0u);
  CHECK(spec.quantile(0.0) == 0u);
  CHECK(spec.quantile(std::nextafter(1.0, 0.0)) <= spec.last());
  CHECK(spec.quantile(std::exp(-7.0) * 0.999) == 0u);
  CHECK(spec.quantile(std::exp(-7.0) * 1.001) == 1u);
}

TEST_CASE("sampled moments") {
  auto g = GeneratorState::seed(std::vector<std::uint8_t>(32, 0x11));
  for (double mu : {7.0, 100.0}) {
    const PoissonSpec spec(mu);
    std::vector<std::uint64_t> xs(1000000);
    for (auto& x : xs) x = spec.sample(g);
    const auto m = moments(xs);
    const double se = std::sqrt(mu / xs.size());
    CAPTURE(mu);
    CHECK(std::abs(m.mean - mu) < 5 * se);
    CHECK(std::abs(m.variance - mu) < 5 * mu * std::sqrt(2.0 / xs.size() + 1.0 / (mu * xs.size())));
    CHECK(*m.skewness == doctest::Approx(1 / std::sqrt(mu)).epsilon(0.1));
  }
}

TEST_CASE("samples follow the pmf") {
  auto g = GeneratorState::seed(std::vector<std::uint8_t>(24, 0x2b));
  const double mu = 7.0;
  const PoissonSpec spec(mu);
  constexpr std::size_t n = 500000;
  std::vector<double> counts(30, 0.0);  // last bin pools the tail
  for (std::size_t i = 0; i < n; ++i) counts[std::min<std::uint64_t>(spec.sample(g), 29)] += 1;
  double chi = 0.0, tail = 1.0;
  for (unsigned k = 0; k < 29; ++k) {
    const double e = n * pmf_by_product(mu, k);
    tail -= pmf_by_product(mu, k);
    chi += (counts[k] - e) * (counts[k] - e) / e;
  }
  const double e_tail = n * tail;
  if (e_tail >= 5) chi += (counts[29] - e_tail) * (counts[29] - e_tail) / e_tail;
  CHECK(chi < 59.7);  // chi-square(29), alpha = 0.001
}

TEST_CASE("theoretical moments") {
  const auto m = theoretical_moments(100);
  CHECK(m.mean == 100);
  CHECK(m.variance == 100);
  CHECK(m.skewness == doctest::Approx(0.1));
  CHECK(m.excess_kurtosis == doctest::Approx(0.01));
}

TEST_CASE("exact residues agree with the characteristic-function route") {
  for (double mu : {0.2, 1.0, 6.62, 7.0, 24.04, 100.0, 361.0, 2500.0}) {
    for (unsigned m : {2u, 3u, 4u, 8u, 16u, 32u, 256u}) {
      CAPTURE(mu);
      CAPTURE(m);
      const auto a = exact_residue_distribution(mu, m);
      const auto b = residues_by_dft(mu, m);
      REQUIRE(a.size() == m);
      double sum = 0;
      for (unsigned k = 0; k < m; ++k) {
        sum += a[k];
        CHECK(std::abs(a[k] - b[k]) < 1e-12);
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(exact_residue_distribution(7, 1), std::invalid_argument);
  CHECK_THROWS_AS(exact_residue_distribution(0, 4), std::domain_error);
}

TEST_CASE("frozen residue deviations") {
  const auto d7 = max_uniform_deviation(exact_residue_distribution(7, 4));
  CHECK(d7 <= 6.84e-4);
  CHECK(d7 == doctest::Approx(3.439428e-4).epsilon(1e-6));
  CHECK(d7 <= deviation_bound(7, 4));
  const auto d662 = max_uniform_deviation(exact_residue_distribution(6.62, 4));
  CHECK(d662 == doctest::Approx(6.296987e-4).epsilon(1e-6));
  CHECK(d662 > 0.5e-3);
}

TEST_CASE("max_uniform_deviation") {
  const std::vector<double> flat(8, 0.125);
  CHECK(max_uniform_deviation(flat) == 0.0);
  const std::vector<double> skew = {0.3, 0.2, 0.25, 0.25};
  CHECK(max_uniform_deviation(skew) == doctest::Approx(0.05));
}
