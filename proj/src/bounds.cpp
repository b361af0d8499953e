#include "dcqrng/bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dcqrng {

namespace {

void check(double mu, std::uint32_t modulus) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw std::domain_error("mu must be positive and finite, got " + std::to_string(mu));
  }
  if (modulus < 2) throw std::domain_error("modulus must be >= 2");
}

double decay_rate(std::uint32_t modulus) {
  const double s = std::sin(std::numbers::pi / modulus);
  return 2.0 * s * s;
}

}  // namespace

double deviation_bound(double mu, std::uint32_t modulus) {
  check(mu, modulus);
  const double m = modulus;
  return (m - 1.0) / m * std::exp(-mu * decay_rate(modulus));
}

double invert_bound(double epsilon, std::uint32_t modulus) {
  if (modulus < 2) throw std::domain_error("modulus must be >= 2");
  const double m = modulus;
  const double ceiling = (m - 1.0) / m;
  if (!(epsilon > 0.0) || epsilon > ceiling) {
    throw std::domain_error("epsilon must lie in (0, (M-1)/M], got " + std::to_string(epsilon));
  }
  if (epsilon == ceiling) return 0.0;
  return std::log(ceiling / epsilon) / decay_rate(modulus);
}

double min_entropy_bound(double mu, std::uint32_t modulus) {
  check(mu, modulus);
  const double m = modulus;
  // log1p keeps precision when the exponential is tiny
  const double excess = (m - 1.0) * std::exp(-mu * decay_rate(modulus));
  return std::log2(m) - std::log1p(excess) / std::numbers::ln2;
}

BoundReport per_byte_report(double mu, std::uint32_t modulus) {
  BoundReport r;
  r.mu = mu;
  r.modulus = modulus;
  r.deviation_bound = deviation_bound(mu, modulus);
  r.min_entropy_per_sample = min_entropy_bound(mu, modulus);
  unsigned bits = 0;
  switch (modulus) {
    case 2: bits = 1; break;
    case 4: bits = 2; break;
    case 16: bits = 4; break;
    case 256: bits = 8; break;
    default: break;
  }
  if (bits != 0) {
    r.samples_per_byte = 8 / bits;
    r.min_entropy_per_byte = *r.samples_per_byte * r.min_entropy_per_sample;
  }
  return r;
}

std::optional<MeanRequirement> reference_mean_row(std::uint32_t modulus) {
  for (const auto& row : kReferenceMeanTable) {
    if (row.modulus == modulus) return row;
  }
  return std::nullopt;
}

std::optional<double> reference_byte_entropy(double mu, std::uint32_t modulus) {
  for (const auto& row : kReferenceByteEntropy) {
    if (row.modulus == modulus && row.mu == mu) return row.min_entropy_per_byte;
  }
  return std::nullopt;
}

}  // namespace dcqrng
