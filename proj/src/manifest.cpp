#include "dcqrng/manifest.hpp"

#include <chrono>
#include <ctime>
#include <stdexcept>

#include <openssl/evp.h>

namespace dcqrng {

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::uint8_t> parse_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = nibble(hex[2 * i]);
    const int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit");
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

nlohmann::json to_json(const TickCalibration& c) {
  return {{"trials", c.trials},
          {"zero_deltas", c.zero_deltas},
          {"negative_deltas", c.negative_deltas},
          {"min_positive_ns", c.min_positive_ns},
          {"median_positive_ns", c.median_positive_ns},
          {"p99_positive_ns", c.p99_positive_ns},
          {"granularity_ns", c.granularity_ns},
          {"recommended_tick_ns", c.recommended_tick_ns}};
}

nlohmann::json to_json(const RpssDiagnostics& d) {
  return {{"cycles", d.cycles},
          {"discarded", d.discarded},
          {"nonmonotonic_intervals", d.nonmonotonic_intervals},
          {"obfuscation_reads", d.obfuscation_reads},
          {"folded_advances", d.folded_advances}};
}

nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["timestamp"] = m.timestamp;
  j["config"] = {{"array_length", m.config.array_length},
                 {"mu", m.config.mu},
                 {"security_discard", m.config.security_discard},
                 {"tick_ns", m.config.tick_ns},
                 {"obfuscation_enabled", m.config.obfuscation_enabled},
                 {"advance_cap", m.config.advance_cap},
                 {"jitter_source", std::string(to_string(m.config.jitter))},
                 {"script_ticks", m.config.script_ticks}};
  j["modulus"] = m.modulus;
  j["n_bytes"] = m.n_bytes;
  j["source"] = std::string(to_string(m.source));
  j["format"] = m.format;
  j["seed_fingerprint_sha256"] = m.seed_fingerprint;
  j["seed_origin"] = m.seed_origin;
  j["tick_calibration"] = m.tick_calibration ? to_json(*m.tick_calibration) : nlohmann::json(nullptr);
  j["diagnostics"] = to_json(m.diagnostics);
  return j;
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.timestamp = j.at("timestamp").get<std::string>();
  const auto& c = j.at("config");
  m.config.array_length = c.at("array_length").get<std::uint32_t>();
  m.config.mu = c.at("mu").get<double>();
  m.config.security_discard = c.at("security_discard").get<std::uint64_t>();
  m.config.tick_ns = c.at("tick_ns").get<std::uint64_t>();
  m.config.obfuscation_enabled = c.at("obfuscation_enabled").get<bool>();
  m.config.advance_cap = c.at("advance_cap").get<std::uint64_t>();
  m.config.jitter = parse_jitter_kind(c.at("jitter_source").get<std::string>());
  m.config.script_ticks = c.at("script_ticks").get<std::vector<std::uint64_t>>();
  m.modulus = j.at("modulus").get<std::uint32_t>();
  m.n_bytes = j.at("n_bytes").get<std::uint64_t>();
  m.source = parse_stream_source(j.at("source").get<std::string>());
  m.format = j.at("format").get<std::string>();
  m.seed_fingerprint = j.at("seed_fingerprint_sha256").get<std::string>();
  m.seed_origin = j.at("seed_origin").get<std::string>();
  if (const auto& t = j.at("tick_calibration"); !t.is_null()) {
    TickCalibration cal;
    cal.trials = t.at("trials").get<std::uint64_t>();
    cal.zero_deltas = t.at("zero_deltas").get<std::uint64_t>();
    cal.negative_deltas = t.at("negative_deltas").get<std::uint64_t>();
    cal.min_positive_ns = t.at("min_positive_ns").get<std::uint64_t>();
    cal.median_positive_ns = t.at("median_positive_ns").get<std::uint64_t>();
    cal.p99_positive_ns = t.at("p99_positive_ns").get<std::uint64_t>();
    cal.granularity_ns = t.at("granularity_ns").get<std::uint64_t>();
    cal.recommended_tick_ns = t.at("recommended_tick_ns").get<std::uint64_t>();
    m.tick_calibration = cal;
  }
  const auto& d = j.at("diagnostics");
  m.diagnostics.cycles = d.at("cycles").get<std::uint64_t>();
  m.diagnostics.discarded = d.at("discarded").get<std::uint64_t>();
  m.diagnostics.nonmonotonic_intervals = d.at("nonmonotonic_intervals").get<std::uint64_t>();
  m.diagnostics.obfuscation_reads = d.at("obfuscation_reads").get<std::uint64_t>();
  m.diagnostics.folded_advances = d.at("folded_advances").get<std::uint64_t>();
  return m;
}

}  // namespace dcqrng
