#include "dcqrng/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <omp.h>

namespace dcqrng {

namespace {

std::uint64_t total(const ByteHistogram& hist) {
  std::uint64_t n = 0;
  for (auto c : hist) n += c;
  if (n == 0) throw std::invalid_argument("empty byte stream");
  return n;
}

struct CentralSums {
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
};

MomentReport finish(std::uint64_t count, double mean, const CentralSums& s) {
  const double n = static_cast<double>(count);
  MomentReport r;
  r.sample_count = count;
  r.mean = mean;
  r.variance = s.m2 / (n - 1.0);
  const double c2 = s.m2 / n;
  if (c2 > 0.0) {
    r.skewness = (s.m3 / n) / std::pow(c2, 1.5);
    r.excess_kurtosis = (s.m4 / n) / (c2 * c2) - 3.0;
  }
  return r;
}

void require_moment_input(std::span<const std::uint64_t> values) {
  if (values.size() < 4) throw std::invalid_argument("moments need at least 4 values");
}

}  // namespace

ByteHistogram byte_histogram_serial(std::span<const std::uint8_t> bytes) {
  ByteHistogram h{};
  for (auto b : bytes) ++h[b];
  return h;
}

ByteHistogram byte_histogram(std::span<const std::uint8_t> bytes) {
  ByteHistogram merged{};
  const auto n = static_cast<std::ptrdiff_t>(bytes.size());
#pragma omp parallel
  {
    ByteHistogram local{};
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) ++local[bytes[static_cast<std::size_t>(i)]];
#pragma omp critical(dcqrng_histogram_merge)
    for (std::size_t b = 0; b < 256; ++b) merged[b] += local[b];
  }
  return merged;
}

double shannon_entropy(const ByteHistogram& hist) {
  const double n = static_cast<double>(total(hist));
  double h = 0.0;
  for (auto c : hist) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

double shannon_entropy(std::span<const std::uint8_t> bytes) {
  return shannon_entropy(byte_histogram(bytes));
}

double min_entropy(const ByteHistogram& hist) {
  const double n = static_cast<double>(total(hist));
  const auto peak = *std::max_element(hist.begin(), hist.end());
  return -std::log2(static_cast<double>(peak) / n);
}

double min_entropy(std::span<const std::uint8_t> bytes) { return min_entropy(byte_histogram(bytes)); }

ChiSquareResult chi_square_uniform(const ByteHistogram& hist) {
  const std::uint64_t n = total(hist);
  if (n < kMinChiSquareSamples) {
    throw std::invalid_argument("chi-square needs at least 1280 bytes");
  }
  const double expected = static_cast<double>(n) / 256.0;
  double stat = 0.0;
  for (auto c : hist) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  return {stat, stat < kChiSquareCritical255};
}

ChiSquareResult chi_square_uniform(std::span<const std::uint8_t> bytes) {
  return chi_square_uniform(byte_histogram(bytes));
}

MomentReport moments_serial(std::span<const std::uint64_t> values) {
  require_moment_input(values);
  double sum = 0.0;
  for (auto v : values) sum += static_cast<double>(v);
  const double mean = sum / static_cast<double>(values.size());
  CentralSums s;
  for (auto v : values) {
    const double d = static_cast<double>(v) - mean;
    const double d2 = d * d;
    s.m2 += d2;
    s.m3 += d2 * d;
    s.m4 += d2 * d2;
  }
  return finish(values.size(), mean, s);
}

MomentReport moments(std::span<const std::uint64_t> values) {
  require_moment_input(values);
  const auto n = static_cast<std::ptrdiff_t>(values.size());
  const std::uint64_t* data = values.data();

  double sum = 0.0;
#pragma omp parallel for simd schedule(static) reduction(+ : sum)
  for (std::ptrdiff_t i = 0; i < n; ++i) sum += static_cast<double>(data[i]);
  const double mean = sum / static_cast<double>(n);

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
#pragma omp parallel for simd schedule(static) reduction(+ : m2, m3, m4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(data[i]) - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  return finish(values.size(), mean, {m2, m3, m4});
}

MomentReport weighted_moments(std::uint64_t first, std::span<const double> weights) {
  if (weights.empty()) throw std::invalid_argument("weighted_moments: no weights");
  long double w = 0.0L, wx = 0.0L;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    w += weights[i];
    wx += weights[i] * static_cast<long double>(first + i);
  }
  const long double mean = wx / w;
  long double c2 = 0.0L, c3 = 0.0L, c4 = 0.0L;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const long double d = static_cast<long double>(first + i) - mean;
    const long double d2 = d * d;
    c2 += weights[i] * d2;
    c3 += weights[i] * d2 * d;
    c4 += weights[i] * d2 * d2;
  }
  c2 /= w;
  c3 /= w;
  c4 /= w;
  MomentReport r;
  r.sample_count = weights.size();
  r.mean = static_cast<double>(mean);
  r.variance = static_cast<double>(c2);
  if (c2 > 0.0L) {
    r.skewness = static_cast<double>(c3 / std::pow(c2, 1.5L));
    r.excess_kurtosis = static_cast<double>(c4 / (c2 * c2) - 3.0L);
  }
  return r;
}

StreamReport analyze_histogram(const ByteHistogram& hist) {
  StreamReport r;
  r.sample_count = total(hist);
  r.byte_histogram = hist;
  r.shannon_bits_per_byte = shannon_entropy(hist);
  r.min_entropy_bits_per_byte = min_entropy(hist);
  if (r.sample_count >= kMinChiSquareSamples) {
    const auto chi = chi_square_uniform(hist);
    r.chi_square = chi.statistic;
    r.pass_alpha_001 = chi.pass;
  }
  return r;
}

StreamReport analyze_stream(std::span<const std::uint8_t> bytes) {
  return analyze_histogram(byte_histogram(bytes));
}

}  // namespace dcqrng
