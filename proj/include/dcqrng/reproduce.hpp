#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcqrng/rpss.hpp"

namespace dcqrng {

// Experiment families, named after the reference tables they mirror:
// II/III Poisson moments, IV/V byte uniformity from counts, VI byte
// uniformity from elapsed ticks, VII large-sample convergence.
enum class Table { II, III, IV, V, VI, VII };
enum class Scale { desk, full };

Table parse_table(std::string_view text);  // "II" or "2", etc.
std::string_view to_string(Table table) noexcept;
Scale parse_scale(std::string_view text);

struct ReproduceOptions {
  Table table = Table::II;
  Scale scale = Scale::desk;
  JitterKind jitter = JitterKind::real_clock;
  std::size_t runs = 0;  // 0 = the reference table's run count
  // Per-run seeds are derived from this; fresh OS entropy when empty.
  std::vector<std::uint8_t> seed;
  std::function<void(std::string_view)> progress;
};

struct Check {
  std::string label;
  double measured = 0.0;
  std::optional<double> reference;
  std::string requirement;  // e.g. ">= 7.9997" or "in [6.99, 7.01]"
  bool pass = false;
};

struct ReproduceReport {
  std::string title;
  std::vector<std::string> notes;
  std::vector<Check> checks;
  std::optional<std::string> skipped;  // reason, when nothing was run

  bool passed() const;
};

ReproduceReport reproduce(const ReproduceOptions& options);

// One-line summary of per_byte_report plus the reference value, if any.
std::string per_byte_report_text(double mu, std::uint32_t modulus);

// 32 bytes from std::random_device.
std::vector<std::uint8_t> os_seed();

}  // namespace dcqrng
