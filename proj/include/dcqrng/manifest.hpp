#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcqrng/pipeline.hpp"
#include "dcqrng/rpss.hpp"

namespace dcqrng {

// Sidecar written next to every generated stream. Holds enough to re-run
// the same invocation except the raw seed, which is only fingerprinted.
struct RunManifest {
  std::string command = "generate";
  std::string timestamp;  // ISO-8601 UTC
  RpssConfig config;
  std::uint32_t modulus = 0;
  std::uint64_t n_bytes = 0;
  StreamSource source = StreamSource::counts;
  std::string format = "raw";
  std::string seed_fingerprint;  // hex SHA-256 of the seed material
  std::string seed_origin;       // "user" or "os"
  std::optional<TickCalibration> tick_calibration;
  RpssDiagnostics diagnostics;
};

std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string utc_timestamp();

// Parses an even-length hex string; throws std::invalid_argument.
std::vector<std::uint8_t> parse_hex(std::string_view hex);

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TickCalibration& c);
nlohmann::json to_json(const RpssDiagnostics& d);

}  // namespace dcqrng
