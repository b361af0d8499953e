#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

namespace dcqrng {

using ByteHistogram = std::array<std::uint64_t, 256>;

// Chi-square critical value for 255 degrees of freedom at alpha = 0.001.
inline constexpr double kChiSquareCritical255 = 325.8;
// Expected count >= 5 in each of the 256 bins.
inline constexpr std::size_t kMinChiSquareSamples = 5 * 256;

// Serial reference kernels. The unsuffixed variants are OpenMP parallel;
// histograms agree exactly, moments up to summation order.
ByteHistogram byte_histogram_serial(std::span<const std::uint8_t> bytes);
ByteHistogram byte_histogram(std::span<const std::uint8_t> bytes);

// All of these throw std::invalid_argument on an empty histogram/input.
double shannon_entropy(const ByteHistogram& hist);
double shannon_entropy(std::span<const std::uint8_t> bytes);
double min_entropy(const ByteHistogram& hist);
double min_entropy(std::span<const std::uint8_t> bytes);

struct ChiSquareResult {
  double statistic = 0.0;
  bool pass = false;  // statistic < kChiSquareCritical255
};

// Throws std::invalid_argument below kMinChiSquareSamples.
ChiSquareResult chi_square_uniform(const ByteHistogram& hist);
ChiSquareResult chi_square_uniform(std::span<const std::uint8_t> bytes);

/// Sample mean, unbiased variance, and population skewness / excess
/// kurtosis (central moments with n divisor). The higher moments are empty
/// when the sample is constant.
struct MomentReport {
  std::uint64_t sample_count = 0;
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> skewness;
  std::optional<double> excess_kurtosis;
};

// Both throw std::invalid_argument for fewer than 4 values.
MomentReport moments_serial(std::span<const std::uint64_t> values);
MomentReport moments(std::span<const std::uint64_t> values);

/// Moments of a distribution on {first, first+1, ...} given its weights.
/// Variance here is the population variance (no sample to correct for).
MomentReport weighted_moments(std::uint64_t first, std::span<const double> weights);

struct StreamReport {
  std::uint64_t sample_count = 0;
  double shannon_bits_per_byte = 0.0;
  double min_entropy_bits_per_byte = 0.0;
  std::optional<double> chi_square;  // empty below kMinChiSquareSamples
  bool pass_alpha_001 = false;
  ByteHistogram byte_histogram{};
};

// Throws std::invalid_argument on empty input.
StreamReport analyze_stream(std::span<const std::uint8_t> bytes);
StreamReport analyze_histogram(const ByteHistogram& hist);

}  // namespace dcqrng
