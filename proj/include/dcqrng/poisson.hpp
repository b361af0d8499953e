#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dcqrng/detprng.hpp"

namespace dcqrng {

// Largest mean the CDF table supports (covers modulus 256 at eps ~ 1e-3).
inline constexpr double kMaxPoissonMean = 1e5;
// Tail mass dropped on each side of the CDF table.
inline constexpr double kCdfTailMass = 1e-15;

// e^{-mu} mu^n / n!, evaluated in log space. Throws std::domain_error for mu <= 0.
double poisson_pmf(double mu, std::uint64_t n);
double poisson_log_pmf(double mu, std::uint64_t n);

/// Poisson(mu) with a cached CDF table for inverse-transform sampling.
///
/// The table covers [first(), first() + cdf().size()). Mass below first() is
/// folded into the first bin and the upper tail beyond the last bin (< 1e-15)
/// is clamped to it, so cdf().back() == 1 and every entry is strictly larger
/// than the one before. Immutable once built; share freely across threads.
class PoissonSpec {
 public:
  explicit PoissonSpec(double mu);

  double mu() const noexcept { return mu_; }
  std::uint64_t first() const noexcept { return first_; }
  std::uint64_t last() const noexcept { return first_ + cdf_.size() - 1; }
  std::span<const double> cdf() const noexcept { return cdf_; }

  // Smallest n with cdf(n) > u; u outside [0,1) is clamped to the table edges.
  std::uint64_t quantile(double u) const noexcept;

  std::uint64_t sample(GeneratorState& gen) const noexcept { return quantile(gen.next_unit()); }

 private:
  double mu_;
  std::uint64_t first_ = 0;
  std::vector<double> cdf_;
};

struct PoissonMoments {
  double mean;
  double variance;
  double skewness;
  double excess_kurtosis;
};

// (mu, mu, mu^{-1/2}, mu^{-1})
PoissonMoments theoretical_moments(double mu);

/// Probability of each residue k = n mod `modulus` for n ~ Poisson(mu).
///
/// Sums the series outward from the mode until terms fall below 1e-18, in
/// extended precision. Throws std::invalid_argument for modulus < 2.
std::vector<double> exact_residue_distribution(double mu, std::uint32_t modulus);

// max_k |P(k) - 1/M| of a residue distribution.
double max_uniform_deviation(std::span<const double> residue_probs);

}  // namespace dcqrng
