#pragma once

#include <string>

#include <json.hpp>

#include "dcqrng/analysis.hpp"
#include "dcqrng/bounds.hpp"
#include "dcqrng/reproduce.hpp"
#include "dcqrng/rpss.hpp"

namespace dcqrng {

// Report serialisation. Text output is one "key: value" per line; the JSON
// documents use the same keys.
//
// StreamReport keys: sample_count, shannon_bits_per_byte,
// min_entropy_bits_per_byte, chi_square (null below 1280 bytes),
// chi_square_critical, pass_alpha_001, byte_histogram (JSON only).
nlohmann::json to_json(const StreamReport& r);
std::string to_text(const StreamReport& r);

// BoundReport keys: mu, modulus, deviation_bound, min_entropy_per_sample,
// samples_per_byte, min_entropy_per_byte, shannon_limit_per_byte, plus
// reference_* keys when a reference value exists for (mu, M).
nlohmann::json to_json(const BoundReport& r);
std::string to_text(const BoundReport& r);

std::string to_text(const TickCalibration& c);

nlohmann::json to_json(const ReproduceReport& r);
std::string to_text(const ReproduceReport& r);

}  // namespace dcqrng
