#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace dcqrng {

/// Upper bound on max_k |P(n mod M = k) - 1/M| for n ~ Poisson(mu):
/// ((M-1)/M) * exp(-2 mu sin^2(pi/M)).
double deviation_bound(double mu, std::uint32_t modulus);

/// Smallest mu with deviation_bound(mu, M) <= epsilon (closed form).
/// Requires 0 < epsilon <= (M-1)/M; throws std::domain_error otherwise.
double invert_bound(double epsilon, std::uint32_t modulus);

/// Lower bound on the min-entropy of one residue, in bits:
/// log2(M) - log2(1 + (M-1) exp(-2 mu sin^2(pi/M))).
double min_entropy_bound(double mu, std::uint32_t modulus);

struct BoundReport {
  double mu = 0.0;
  std::uint32_t modulus = 0;
  double deviation_bound = 0.0;
  double min_entropy_per_sample = 0.0;
  // Present only when log2(M) divides 8, i.e. M in {2, 4, 16, 256}.
  std::optional<unsigned> samples_per_byte;
  std::optional<double> min_entropy_per_byte;
  double shannon_limit_per_byte = 8.0;
};

BoundReport per_byte_report(double mu, std::uint32_t modulus);

// Reference minimum-mean table for eps ~ 1e-3 as reported for the original
// Java implementation. Kept for side-by-side comparison only; nothing in the
// library derives from it.
struct MeanRequirement {
  std::uint32_t modulus;
  double exact_mu;
  double conservative_mu;
  double empirical_mu;
};

inline constexpr std::array<MeanRequirement, 6> kReferenceMeanTable = {{
    {4, 6.62, 7.60, 6.40},
    {8, 24.04, 25.95, 23.0},
    {16, 91.57, 99.83, 88.0},
    {32, 361.0, 395.50, 320.0},
    {64, 1437.5, 1582.00, 1300.0},
    {256, 22950.0, 25312.00, 22000.0},
}};

// Reported per-byte "theoretical" min-entropy for the two validated regimes.
// These do not follow from min_entropy_bound scaled per byte; see README.
struct ReferenceByteEntropy {
  double mu;
  std::uint32_t modulus;
  double min_entropy_per_byte;
};

inline constexpr std::array<ReferenceByteEntropy, 2> kReferenceByteEntropy = {{
    {7.0, 4, 7.9682},
    {100.0, 16, 7.9741},
}};

std::optional<MeanRequirement> reference_mean_row(std::uint32_t modulus);
std::optional<double> reference_byte_entropy(double mu, std::uint32_t modulus);

}  // namespace dcqrng
