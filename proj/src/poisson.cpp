#include "dcqrng/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dcqrng {

namespace {

void require_mean(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw std::domain_error("Poisson mean must be positive and finite, got " + std::to_string(mu));
  }
}

}  // namespace

double poisson_log_pmf(double mu, std::uint64_t n) {
  require_mean(mu);
  const double nd = static_cast<double>(n);
  return nd * std::log(mu) - mu - std::lgamma(nd + 1.0);
}

double poisson_pmf(double mu, std::uint64_t n) { return std::exp(poisson_log_pmf(mu, n)); }

PoissonSpec::PoissonSpec(double mu) : mu_(mu) {
  require_mean(mu);
  if (mu > kMaxPoissonMean) {
    throw std::domain_error("Poisson mean above supported maximum " +
                            std::to_string(kMaxPoissonMean));
  }
  // Window wide enough that both excluded tails are far below 1e-15.
  const double spread = 12.0 * std::sqrt(mu) + 40.0;
  const auto lo = static_cast<std::uint64_t>(std::max(0.0, std::floor(mu - spread)));
  const auto hi = static_cast<std::uint64_t>(std::ceil(mu + spread));

  std::vector<double> pmf(hi - lo + 1);
  for (std::uint64_t n = lo; n <= hi; ++n) pmf[n - lo] = poisson_pmf(mu, n);

  // Left cumulative and right survivor sums, each accumulated from its own
  // small end so neither loses the tail terms to rounding.
  std::vector<long double> below(pmf.size());  // P(N <= n) within window
  long double acc = 0.0L;
  for (std::size_t i = 0; i < pmf.size(); ++i) below[i] = (acc += pmf[i]);
  std::vector<long double> above(pmf.size());  // P(N > n) within window
  acc = 0.0L;
  for (std::size_t i = pmf.size(); i-- > 0;) {
    above[i] = acc;
    acc += pmf[i];
  }
  const long double total = below.back();

  std::size_t begin = 0;
  while (begin + 1 < pmf.size() && below[begin] < kCdfTailMass) ++begin;
  std::size_t end = begin;
  while (end + 1 < pmf.size() && above[end] >= kCdfTailMass) ++end;

  first_ = lo + begin;
  cdf_.reserve(end - begin + 1);
  for (std::size_t i = begin; i < end; ++i) {
    const double c = static_cast<double>(1.0L - above[i] / total);
    // rounding near 1 can collapse adjacent entries; the table must stay strict
    if (!cdf_.empty() && c <= cdf_.back()) break;
    cdf_.push_back(c);
  }
  cdf_.push_back(1.0);
}

std::uint64_t PoissonSpec::quantile(double u) const noexcept {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto idx = it == cdf_.end() ? cdf_.size() - 1
                                    : static_cast<std::size_t>(it - cdf_.begin());
  return first_ + idx;
}

PoissonMoments theoretical_moments(double mu) {
  require_mean(mu);
  return {mu, mu, 1.0 / std::sqrt(mu), 1.0 / mu};
}

std::vector<double> exact_residue_distribution(double mu, std::uint32_t modulus) {
  require_mean(mu);
  if (modulus < 2) throw std::invalid_argument("modulus must be >= 2");

  constexpr long double kStop = 1e-18L;
  std::vector<long double> bins(modulus, 0.0L);
  const auto mode = static_cast<std::uint64_t>(std::floor(mu));
  const long double at_mode = std::exp(static_cast<long double>(poisson_log_pmf(mu, mode)));
  const long double lmu = mu;

  bins[mode % modulus] += at_mode;
  long double term = at_mode;
  for (std::uint64_t n = mode + 1;; ++n) {
    term *= lmu / static_cast<long double>(n);
    bins[n % modulus] += term;
    if (term < kStop) break;
  }
  term = at_mode;
  for (std::uint64_t n = mode; n > 0; --n) {
    term *= static_cast<long double>(n) / lmu;
    bins[(n - 1) % modulus] += term;
    if (term < kStop) break;
  }

  // The recurrences carry the relative error of the single lgamma at the
  // mode; renormalising removes it without touching the residue shape.
  long double total = 0.0L;
  for (auto b : bins) total += b;
  std::vector<double> out(modulus);
  for (std::uint32_t k = 0; k < modulus; ++k) out[k] = static_cast<double>(bins[k] / total);
  return out;
}

double max_uniform_deviation(std::span<const double> residue_probs) {
  const double uniform = 1.0 / static_cast<double>(residue_probs.size());
  double worst = 0.0;
  for (double p : residue_probs) worst = std::max(worst, std::abs(p - uniform));
  return worst;
}

}  // namespace dcqrng
