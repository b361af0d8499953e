#include "dcqrng/report_io.hpp"

#include <iomanip>
#include <sstream>

namespace dcqrng {

namespace {

std::string num(double v, int precision) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

}  // namespace

nlohmann::json to_json(const StreamReport& r) {
  nlohmann::json j;
  j["sample_count"] = r.sample_count;
  j["shannon_bits_per_byte"] = r.shannon_bits_per_byte;
  j["min_entropy_bits_per_byte"] = r.min_entropy_bits_per_byte;
  j["chi_square"] = r.chi_square ? nlohmann::json(*r.chi_square) : nlohmann::json(nullptr);
  j["chi_square_critical"] = kChiSquareCritical255;
  j["pass_alpha_001"] = r.pass_alpha_001;
  j["byte_histogram"] = r.byte_histogram;
  return j;
}

std::string to_text(const StreamReport& r) {
  std::ostringstream os;
  os << "sample_count: " << r.sample_count << '\n'
     << "shannon_bits_per_byte: " << num(r.shannon_bits_per_byte, 6) << '\n'
     << "min_entropy_bits_per_byte: " << num(r.min_entropy_bits_per_byte, 4) << '\n'
     << "chi_square: " << (r.chi_square ? num(*r.chi_square, 1) : std::string("n/a")) << '\n'
     << "chi_square_critical: " << num(kChiSquareCritical255, 1) << '\n'
     << "pass_alpha_001: " << (r.pass_alpha_001 ? "true" : "false") << '\n';
  return os.str();
}

nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json j;
  j["mu"] = r.mu;
  j["modulus"] = r.modulus;
  j["deviation_bound"] = r.deviation_bound;
  j["min_entropy_per_sample"] = r.min_entropy_per_sample;
  j["samples_per_byte"] = r.samples_per_byte ? nlohmann::json(*r.samples_per_byte) : nlohmann::json(nullptr);
  j["min_entropy_per_byte"] =
      r.min_entropy_per_byte ? nlohmann::json(*r.min_entropy_per_byte) : nlohmann::json(nullptr);
  j["shannon_limit_per_byte"] = r.shannon_limit_per_byte;
  if (auto ref = reference_byte_entropy(r.mu, r.modulus)) j["reference_min_entropy_per_byte"] = *ref;
  if (auto row = reference_mean_row(r.modulus)) j["reference_exact_mu"] = row->exact_mu;
  return j;
}

std::string to_text(const BoundReport& r) {
  std::ostringstream os;
  os << "mu: " << num(r.mu, 6) << '\n'
     << "modulus: " << r.modulus << '\n'
     << "deviation_bound: " << std::scientific << std::setprecision(6) << r.deviation_bound
     << std::defaultfloat << '\n'
     << "min_entropy_per_sample: " << num(r.min_entropy_per_sample, 6) << '\n';
  if (r.samples_per_byte) {
    os << "samples_per_byte: " << *r.samples_per_byte << '\n'
       << "min_entropy_per_byte: " << num(*r.min_entropy_per_byte, 6) << '\n';
  } else {
    os << "samples_per_byte: n/a\nmin_entropy_per_byte: n/a\n";
  }
  os << "shannon_limit_per_byte: " << num(r.shannon_limit_per_byte, 4) << '\n';
  if (auto ref = reference_byte_entropy(r.mu, r.modulus)) {
    os << "reference_min_entropy_per_byte: " << num(*ref, 4) << '\n';
  }
  if (auto row = reference_mean_row(r.modulus)) {
    os << "reference_exact_mu: " << row->exact_mu << '\n';
  }
  return os.str();
}

std::string to_text(const TickCalibration& c) {
  std::ostringstream os;
  os << "trials: " << c.trials << '\n'
     << "zero_deltas: " << c.zero_deltas << '\n'
     << "negative_deltas: " << c.negative_deltas << '\n'
     << "min_positive_ns: " << c.min_positive_ns << '\n'
     << "median_positive_ns: " << c.median_positive_ns << '\n'
     << "p99_positive_ns: " << c.p99_positive_ns << '\n'
     << "granularity_ns: " << c.granularity_ns << '\n'
     << "recommended_tick_ns: " << c.recommended_tick_ns << '\n';
  return os.str();
}

nlohmann::json to_json(const ReproduceReport& r) {
  nlohmann::json j;
  j["title"] = r.title;
  j["notes"] = r.notes;
  j["skipped"] = r.skipped ? nlohmann::json(*r.skipped) : nlohmann::json(nullptr);
  j["passed"] = r.passed();
  auto& checks = j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"label", c.label},
                      {"measured", c.measured},
                      {"reference", c.reference ? nlohmann::json(*c.reference) : nlohmann::json(nullptr)},
                      {"requirement", c.requirement},
                      {"pass", c.pass}});
  }
  return j;
}

std::string to_text(const ReproduceReport& r) {
  std::ostringstream os;
  os << r.title << '\n';
  for (const auto& n : r.notes) os << "  note: " << n << '\n';
  if (r.skipped) {
    os << "  SKIPPED: " << *r.skipped << '\n';
    return os.str();
  }
  for (const auto& c : r.checks) {
    os << "  " << (c.pass ? "PASS" : "FAIL") << "  " << std::left << std::setw(34) << c.label
       << " measured " << std::setw(12) << std::setprecision(7) << c.measured;
    if (c.reference) os << " reference " << std::setw(10) << *c.reference;
    os << " " << c.requirement << '\n';
  }
  os << (r.passed() ? "overall: PASS\n" : "overall: FAIL\n");
  return os.str();
}

}  // namespace dcqrng
