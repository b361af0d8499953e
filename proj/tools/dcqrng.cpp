// dcqrng: generate, analyse and certify permutation-jitter random bytes.
//
// Exit codes: 0 ok, 2 bad arguments, 3 I/O failure, 4 statistical
// acceptance failure (reproduce).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dcqrng/analysis.hpp"
#include "dcqrng/bounds.hpp"
#include "dcqrng/manifest.hpp"
#include "dcqrng/pipeline.hpp"
#include "dcqrng/projection.hpp"
#include "dcqrng/report_io.hpp"
#include "dcqrng/reproduce.hpp"
#include "dcqrng/rpss.hpp"

namespace {

using namespace dcqrng;

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 2;
constexpr int kExitIo = 3;
constexpr int kExitAcceptance = 4;

struct CliError : std::runtime_error {
  CliError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
  int code;
};

std::vector<std::uint64_t> parse_ticks(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CliError(kExitBadArgs, "bad --script entry '" + item + "'");
    }
  }
  if (out.empty()) throw CliError(kExitBadArgs, "--script needs at least one tick value");
  return out;
}

struct GenerateArgs {
  double mu = 7.0;
  std::uint32_t modulus = 4;
  std::uint64_t n_bytes = 0;
  std::string seed_hex;
  std::uint64_t discard = 1024;
  std::string source = "counts";
  std::string out_path;
  std::string format = "raw";
  std::string jitter = "real";
  std::string script = "1";
  std::uint64_t tick_ns = 0;
  std::uint32_t array_length = 4;
  std::uint64_t advance_cap = kDefaultAdvanceCap;
  bool no_obfuscation = false;
  bool no_manifest = false;
};

int run_generate(const GenerateArgs& a) {
  try {
    residue_bits(a.modulus);
  } catch (const std::invalid_argument& e) {
    throw CliError(kExitBadArgs, e.what());
  }
  if (a.n_bytes == 0) throw CliError(kExitBadArgs, "--bytes must be >= 1");

  RunManifest manifest;
  manifest.timestamp = utc_timestamp();
  manifest.modulus = a.modulus;
  manifest.n_bytes = a.n_bytes;
  manifest.format = a.format;

  std::vector<std::uint8_t> seed;
  try {
    manifest.source = parse_stream_source(a.source);
    manifest.config.jitter = parse_jitter_kind(a.jitter);
    seed = a.seed_hex.empty() ? os_seed() : parse_hex(a.seed_hex);
    if (seed.size() < kMinSeedBytes) {
      throw std::invalid_argument("--seed must be at least 16 bytes (32 hex digits)");
    }
    manifest.config.mu = a.mu;
    manifest.config.security_discard = a.discard;
    manifest.config.array_length = a.array_length;
    manifest.config.advance_cap = a.advance_cap;
    manifest.config.obfuscation_enabled = !a.no_obfuscation;
    manifest.config.script_ticks = parse_ticks(a.script);
    manifest.config = with_env_overrides(manifest.config);
    if (a.tick_ns != 0) manifest.config.tick_ns = a.tick_ns;
    manifest.config.validate();
  } catch (const std::invalid_argument& e) {
    throw CliError(kExitBadArgs, e.what());
  }
  manifest.seed_origin = a.seed_hex.empty() ? "os" : "user";
  manifest.seed_fingerprint = sha256_hex(seed);
  if (manifest.config.jitter == JitterKind::real_clock) {
    manifest.tick_calibration = calibrate_tick(steady_clock_ns);
  }

  const bool to_stdout = a.out_path == "-";
  std::ofstream file;
  if (!to_stdout) {
    file.open(a.out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw CliError(kExitIo, "cannot open '" + a.out_path + "' for writing");
  }
  std::ostream& out = to_stdout ? std::cout : file;

  auto engine = RpssEngine::from_seed(manifest.config, seed);
  std::size_t column = 0;
  stream_bytes(engine, manifest.source, a.modulus, a.n_bytes, [&](std::span<const std::uint8_t> chunk) {
    if (a.format == "raw") {
      out.write(reinterpret_cast<const char*>(chunk.data()), static_cast<std::streamsize>(chunk.size()));
      return;
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string line;
    for (auto b : chunk) {
      line.push_back(kHex[b >> 4]);
      line.push_back(kHex[b & 0xf]);
      if (++column == 32) {
        line.push_back('\n');
        column = 0;
      }
    }
    out << line;
  });
  if (a.format == "hex" && column != 0) out << '\n';
  out.flush();
  if (!out) throw CliError(kExitIo, "write to '" + a.out_path + "' failed");

  manifest.diagnostics = engine.diagnostics();
  if (!to_stdout && !a.no_manifest) {
    const std::string path = a.out_path + ".manifest.json";
    std::ofstream mf(path, std::ios::trunc);
    mf << to_json(manifest).dump(2) << '\n';
    if (!mf) throw CliError(kExitIo, "cannot write manifest '" + path + "'");
  }
  std::cerr << "wrote " << a.n_bytes << " bytes (" << engine.diagnostics().cycles << " cycles, "
            << engine.diagnostics().nonmonotonic_intervals << " non-monotonic intervals)\n";
  return kExitOk;
}

int run_analyze(const std::string& path, const std::string& format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(kExitIo, "cannot read '" + path + "'");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw CliError(kExitIo, "read error on '" + path + "'");
  if (bytes.empty()) throw CliError(kExitBadArgs, "'" + path + "' is empty");
  const auto report = analyze_stream(bytes);
  if (format == "json") {
    std::cout << to_json(report).dump(2) << '\n';
  } else {
    if (!report.chi_square) std::cout << "# fewer than 1280 bytes: entropy-only report\n";
    std::cout << to_text(report);
  }
  return kExitOk;
}

int run_bounds(std::uint32_t modulus, const std::vector<double>& mu, const std::vector<double>& epsilon,
               const std::string& format) {
  if (mu.size() + epsilon.size() != 1) {
    throw CliError(kExitBadArgs, "give exactly one of --mu or --epsilon");
  }
  try {
    if (!mu.empty()) {
      const auto report = per_byte_report(mu.front(), modulus);
      std::cout << (format == "json" ? to_json(report).dump(2) + "\n" : to_text(report));
      return kExitOk;
    }
    const double min_mu = invert_bound(epsilon.front(), modulus);
    const auto row = reference_mean_row(modulus);
    if (format == "json") {
      nlohmann::json j{{"epsilon", epsilon.front()}, {"modulus", modulus}, {"minimum_mu", min_mu}};
      if (row) j["reference_exact_mu"] = row->exact_mu;
      std::cout << j.dump(2) << '\n';
    } else {
      std::cout << "epsilon: " << epsilon.front() << "\nmodulus: " << modulus << "\nminimum_mu: " << min_mu
                << '\n';
      if (row) std::cout << "reference_exact_mu: " << row->exact_mu << '\n';
    }
  } catch (const std::domain_error& e) {
    throw CliError(kExitBadArgs, e.what());
  }
  return kExitOk;
}

int run_calibrate(std::size_t trials, bool pilot, double pilot_mu, const std::string& format) {
  if (trials == 0) throw CliError(kExitBadArgs, "--trials must be >= 1");
  const auto cal = calibrate_tick(steady_clock_ns, trials);
  std::optional<ElapsedTickCalibration> elapsed;
  if (pilot) {
    RpssConfig cfg;
    cfg.mu = pilot_mu;
    elapsed = calibrate_elapsed_tick(cfg, os_seed());
  }
  if (format == "json") {
    auto j = to_json(cal);
    if (elapsed) {
      j["elapsed_tick_ns"] = elapsed->tick_ns ? nlohmann::json(*elapsed->tick_ns) : nlohmann::json(nullptr);
      j["elapsed_best_tick_ns"] = elapsed->best_tick_ns;
      auto& probes = j["elapsed_probes"] = nlohmann::json::array();
      for (const auto& p : elapsed->probes) {
        probes.push_back({{"tick_ns", p.tick_ns}, {"chi_square", p.chi_square}, {"uniform", p.uniform}});
      }
    }
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << to_text(cal);
    if (elapsed) {
      for (const auto& p : elapsed->probes) {
        std::cout << "elapsed_probe: tick_ns " << p.tick_ns << " chi_square " << p.chi_square
                  << (p.uniform ? " uniform\n" : " biased\n");
      }
      std::cout << "elapsed_best_tick_ns: " << elapsed->best_tick_ns << '\n';
      std::cout << "elapsed_tick_ns: "
                << (elapsed->tick_ns ? std::to_string(*elapsed->tick_ns) : std::string("none")) << '\n';
    }
  }
  return kExitOk;
}

struct ReproduceArgs {
  std::string table = "II";
  std::string scale = "desk";
  std::string jitter = "real";
  std::size_t runs = 0;
  std::string seed_hex;
  std::string format = "text";
};

int run_reproduce(const ReproduceArgs& a) {
  ReproduceOptions opts;
  try {
    opts.table = parse_table(a.table);
    opts.scale = parse_scale(a.scale);
    opts.jitter = parse_jitter_kind(a.jitter);
    if (!a.seed_hex.empty()) opts.seed = parse_hex(a.seed_hex);
    if (!a.seed_hex.empty() && opts.seed.size() < kMinSeedBytes) {
      throw std::invalid_argument("--seed must be at least 16 bytes");
    }
  } catch (const std::invalid_argument& e) {
    throw CliError(kExitBadArgs, e.what());
  }
  opts.runs = a.runs;
  opts.progress = [](std::string_view msg) { std::cerr << "  ... " << msg << '\n'; };
  const auto report = reproduce(opts);
  std::cout << (a.format == "json" ? to_json(report).dump(2) + "\n" : to_text(report));
  return report.passed() ? kExitOk : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Digital coherent-state random byte generator and validation suite"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Run the permutation engine and write projected bytes");
  g->add_option("--mu", gen.mu, "Poisson mean")->capture_default_str();
  g->add_option("--modulus,-M", gen.modulus, "Projection modulus (power of two, 2..256)")->capture_default_str();
  g->add_option("--bytes,-n", gen.n_bytes, "Number of output bytes")->required();
  g->add_option("--seed", gen.seed_hex, "Seed as hex (>= 16 bytes); OS entropy when omitted");
  g->add_option("--discard", gen.discard, "Security-phase cycles to drop")->capture_default_str();
  g->add_option("--source", gen.source, "counts | elapsed")->capture_default_str();
  g->add_option("--out,-o", gen.out_path, "Output path, '-' for stdout")->required();
  g->add_option("--format", gen.format, "raw | hex")->check(CLI::IsMember({"raw", "hex"}))->capture_default_str();
  g->add_option("--jitter", gen.jitter, "real | scripted")->capture_default_str();
  g->add_option("--script", gen.script, "Comma-separated tick values replayed under scripted jitter")
      ->capture_default_str();
  g->add_option("--tick-ns", gen.tick_ns, "Tick length in ns (overrides $DCQRNG_TICK_NS; default 100)");
  g->add_option("--array-length,-L", gen.array_length, "Permuted array length")->capture_default_str();
  g->add_option("--advance-cap", gen.advance_cap, "Largest single generator advance")->capture_default_str();
  g->add_flag("--no-obfuscation", gen.no_obfuscation, "Disable obfuscation clock reads");
  g->add_flag("--no-manifest", gen.no_manifest, "Do not write the .manifest.json sidecar");

  std::string analyze_path, analyze_format = "text";
  auto* an = app.add_subcommand("analyze", "Entropy and chi-square report for a byte file");
  an->add_option("input", analyze_path, "File to analyse")->required();
  an->add_option("--format", analyze_format, "text | json")->check(CLI::IsMember({"text", "json"}));

  std::uint32_t bounds_modulus = 4;
  std::vector<double> bounds_mu, bounds_eps;
  std::string bounds_format = "text";
  auto* bo = app.add_subcommand("bounds", "Deviation and min-entropy bounds, or minimum mu for a target");
  bo->add_option("--modulus,-M", bounds_modulus, "Projection modulus")->capture_default_str();
  bo->add_option("--mu", bounds_mu, "Poisson mean")->expected(1);
  bo->add_option("--epsilon", bounds_eps, "Target maximum deviation from uniform")->expected(1);
  bo->add_option("--format", bounds_format, "text | json")->check(CLI::IsMember({"text", "json"}));

  std::size_t cal_trials = 100000;
  bool cal_pilot = false;
  double cal_mu = 100.0;
  std::string cal_format = "text";
  auto* ca = app.add_subcommand("calibrate", "Measure clock resolution and recommend a tick length");
  ca->add_option("--trials", cal_trials, "Back-to-back clock reads")->capture_default_str();
  ca->add_flag("--pilot", cal_pilot, "Also run the elapsed-stream tick pilot (worst-segment chi-square per tick)");
  ca->add_option("--pilot-mu", cal_mu, "Poisson mean for the pilot")->capture_default_str();
  ca->add_option("--format", cal_format, "text | json")->check(CLI::IsMember({"text", "json"}));

  ReproduceArgs rep;
  auto* re = app.add_subcommand("reproduce", "Run a reference experiment and compare against its table");
  re->add_option("--table,-t", rep.table, "II | III | IV | V | VI | VII")->required();
  re->add_option("--scale", rep.scale, "desk | full")->capture_default_str();
  re->add_option("--jitter", rep.jitter, "real | scripted")->capture_default_str();
  re->add_option("--runs", rep.runs, "Independent runs (default: as in the reference table)");
  re->add_option("--seed", rep.seed_hex, "Base seed as hex; OS entropy when omitted");
  re->add_option("--format", rep.format, "text | json")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadArgs;
  }

  try {
    if (*g) return run_generate(gen);
    if (*an) return run_analyze(analyze_path, analyze_format);
    if (*bo) return run_bounds(bounds_modulus, bounds_mu, bounds_eps, bounds_format);
    if (*ca) return run_calibrate(cal_trials, cal_pilot, cal_mu, cal_format);
    if (*re) return run_reproduce(rep);
  } catch (const CliError& e) {
    std::cerr << "dcqrng: " << e.what() << '\n';
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "dcqrng: " << e.what() << '\n';
    return kExitBadArgs;
  }
  return kExitBadArgs;
}
