#include "dcqrng/reproduce.hpp"

#include <array>
#include <cstdlib>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dcqrng/analysis.hpp"
#include "dcqrng/bounds.hpp"
#include "dcqrng/pipeline.hpp"

namespace dcqrng {

namespace {

struct MomentRow {
  double mean, variance, skewness, kurtosis;
};

constexpr std::array<MomentRow, 5> kMomentsMu7 = {{{6.999, 7.000, 0.376, 0.141},
                                                   {6.999, 7.007, 0.379, 0.139},
                                                   {6.997, 7.003, 0.380, 0.147},
                                                   {6.999, 7.004, 0.379, 0.153},
                                                   {6.996, 6.999, 0.379, 0.149}}};
constexpr std::array<MomentRow, 5> kMomentsMu100 = {{{100.00, 99.92, 0.094, 0.0068},
                                                     {100.01, 100.07, 0.098, 0.0091},
                                                     {99.99, 99.95, 0.098, 0.0060},
                                                     {99.99, 100.01, 0.102, 0.010},
                                                     {100.00, 100.10, 0.105, 0.020}}};

struct Envelope {
  double lo, hi;
};

struct MomentEnvelope {
  Envelope mean, variance, skewness, kurtosis;
};

constexpr MomentEnvelope kEnvelopeMu7{{6.99, 7.01}, {6.95, 7.05}, {0.36, 0.40}, {0.12, 0.17}};
constexpr MomentEnvelope kEnvelopeMu100{{99.9, 100.1}, {99.5, 100.5}, {0.09, 0.11}, {0.005, 0.021}};

struct UniformityRow {
  double shannon, min_entropy, chi_square;
};

constexpr std::array<UniformityRow, 10> kUniformityMu7 = {{{7.9998, 7.948, 220.3},
                                                           {7.9998, 7.941, 223.2},
                                                           {7.9998, 7.939, 237.4},
                                                           {7.9998, 7.927, 267.6},
                                                           {7.9998, 7.943, 259.0},
                                                           {7.9998, 7.940, 253.0},
                                                           {7.9998, 7.931, 244.7},
                                                           {7.9998, 7.939, 218.4},
                                                           {7.9998, 7.935, 254.4},
                                                           {7.9998, 7.948, 246.5}}};
constexpr std::array<UniformityRow, 10> kUniformityMu100 = {{{7.9998, 7.941, 229.7},
                                                             {7.9998, 7.935, 255.2},
                                                             {7.9998, 7.935, 306.6},
                                                             {7.9998, 7.929, 250.5},
                                                             {7.9998, 7.931, 259.9},
                                                             {7.9998, 7.930, 267.6},
                                                             {7.9998, 7.946, 233.0},
                                                             {7.9998, 7.945, 236.3},
                                                             {7.9998, 7.942, 249.1},
                                                             {7.9998, 7.919, 236.4}}};

struct ElapsedRow {
  double shannon, min_entropy;
};

constexpr std::array<ElapsedRow, 10> kElapsedMu100 = {{{7.9997, 7.907}, {7.9997, 7.922},
                                                       {7.9998, 7.943}, {7.9997, 7.933},
                                                       {7.9998, 7.924}, {7.9998, 7.928},
                                                       {7.9998, 7.931}, {7.9998, 7.946},
                                                       {7.9998, 7.940}, {7.9997, 7.930}}};
constexpr std::array<ElapsedRow, 10> kElapsedMu200 = {{{7.9997, 7.901}, {7.9998, 7.935},
                                                       {7.9998, 7.944}, {7.9998, 7.915},
                                                       {7.9998, 7.926}, {7.9998, 7.928},
                                                       {7.9998, 7.912}, {7.9998, 7.938},
                                                       {7.9998, 7.922}, {7.9998, 7.943}}};

struct LargeScaleRow {
  std::size_t bytes;
  ElapsedRow mu7, mu100;  // (shannon, min-entropy)
  double shannon_floor;
  std::optional<double> min_entropy_floor;
};

const std::array<LargeScaleRow, 3> kLargeScale = {{
    {1'000'000, {7.999823, 7.9304}, {7.999831, 7.9353}, 7.9997, 7.90},
    {10'000'000, {7.999983, 7.9763}, {7.999984, 7.9832}, 7.99997, 7.97},
    {100'000'000, {7.999993, 7.9885}, {7.999998, 7.9915}, 7.99999, std::nullopt},
}};

constexpr double kShannonFloor = 7.9997;
constexpr double kMinEntropyFloor = 7.90;
constexpr double kElapsedShannonFloor = 7.9995;
constexpr double kElapsedMinEntropyFloor = 7.88;

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

Check in_range(std::string label, double v, std::optional<double> ref, Envelope e) {
  return {std::move(label), v, ref, "in [" + fmt(e.lo) + ", " + fmt(e.hi) + "]", e.lo <= v && v <= e.hi};
}

Check at_least(std::string label, double v, std::optional<double> ref, double floor) {
  return {std::move(label), v, ref, ">= " + fmt(floor, 8), v >= floor};
}

Check below(std::string label, double v, std::optional<double> ref, double ceiling) {
  return {std::move(label), v, ref, "< " + fmt(ceiling), v < ceiling};
}

class Runner {
 public:
  explicit Runner(const ReproduceOptions& o) : opts_(o), base_seed_(o.seed.empty() ? os_seed() : o.seed) {}

  std::vector<std::uint8_t> run_seed(std::size_t run, std::uint32_t salt) const {
    auto s = base_seed_;
    for (int b = 0; b < 8; ++b) s.push_back(static_cast<std::uint8_t>(run >> (8 * b)));
    for (int b = 0; b < 4; ++b) s.push_back(static_cast<std::uint8_t>(salt >> (8 * b)));
    return s;
  }

  RpssConfig config(double mu) const {
    RpssConfig c;
    c.mu = mu;
    c.jitter = opts_.jitter;
    return with_env_overrides(c);
  }

  void progress(const std::string& msg) const {
    if (opts_.progress) opts_.progress(msg);
  }

  std::size_t runs(std::size_t reference_runs) const { return opts_.runs ? opts_.runs : reference_runs; }

  const ReproduceOptions& opts() const { return opts_; }

 private:
  const ReproduceOptions& opts_;
  std::vector<std::uint8_t> base_seed_;
};

void moment_table(const Runner& run, ReproduceReport& rep, double mu,
                  std::span<const MomentRow> ref, const MomentEnvelope& env) {
  constexpr std::size_t kSamples = 1'000'000;
  const auto theory = theoretical_moments(mu);
  rep.notes.push_back("theoretical: mean " + fmt(theory.mean) + ", variance " + fmt(theory.variance) +
                      ", skewness " + fmt(theory.skewness, 4) + ", excess kurtosis " +
                      fmt(theory.excess_kurtosis, 4));
  const std::size_t n = run.runs(ref.size());
  for (std::size_t r = 0; r < n; ++r) {
    run.progress("run " + std::to_string(r + 1) + "/" + std::to_string(n));
    auto engine = RpssEngine::from_seed(run.config(mu), run.run_seed(r, 2));
    const auto m = moments(engine.generate_counts(kSamples));
    const auto* row = r < ref.size() ? &ref[r] : nullptr;
    const std::string tag = "run " + std::to_string(r + 1) + " ";
    rep.checks.push_back(in_range(tag + "mean", m.mean, row ? std::optional(row->mean) : std::nullopt, env.mean));
    rep.checks.push_back(
        in_range(tag + "variance", m.variance, row ? std::optional(row->variance) : std::nullopt, env.variance));
    rep.checks.push_back(in_range(tag + "skewness", m.skewness.value_or(0.0),
                                  row ? std::optional(row->skewness) : std::nullopt, env.skewness));
    rep.checks.push_back(in_range(tag + "excess kurtosis", m.excess_kurtosis.value_or(0.0),
                                  row ? std::optional(row->kurtosis) : std::nullopt, env.kurtosis));
  }
}

void uniformity_table(const Runner& run, ReproduceReport& rep, double mu, std::uint32_t modulus,
                      std::span<const UniformityRow> ref) {
  constexpr std::size_t kBytes = 1'000'000;
  const auto bound = per_byte_report_text(mu, modulus);
  rep.notes.push_back(bound);
  const std::size_t n = run.runs(ref.size());
  std::size_t chi_pass = 0;
  for (std::size_t r = 0; r < n; ++r) {
    run.progress("run " + std::to_string(r + 1) + "/" + std::to_string(n));
    auto engine = RpssEngine::from_seed(run.config(mu), run.run_seed(r, 4));
    const auto rep_stream = analyze_stream(generate_bytes(engine, StreamSource::counts, modulus, kBytes));
    const auto* row = r < ref.size() ? &ref[r] : nullptr;
    const std::string tag = "run " + std::to_string(r + 1) + " ";
    rep.checks.push_back(at_least(tag + "shannon", rep_stream.shannon_bits_per_byte,
                                  row ? std::optional(row->shannon) : std::nullopt, kShannonFloor));
    rep.checks.push_back(at_least(tag + "min-entropy", rep_stream.min_entropy_bits_per_byte,
                                  row ? std::optional(row->min_entropy) : std::nullopt, kMinEntropyFloor));
    auto chi = below(tag + "chi-square", *rep_stream.chi_square,
                     row ? std::optional(row->chi_square) : std::nullopt, kChiSquareCritical255);
    if (chi.pass) ++chi_pass;
    chi.pass = true;  // judged in aggregate below
    chi.requirement += " (aggregate)";
    rep.checks.push_back(std::move(chi));
  }
  const auto needed = static_cast<double>(n) * 0.9;
  rep.checks.push_back({"runs with chi-square < 325.8", static_cast<double>(chi_pass), std::nullopt,
                        ">= " + fmt(needed) + " of " + std::to_string(n),
                        static_cast<double>(chi_pass) >= needed});
}

void elapsed_table(const Runner& run, ReproduceReport& rep) {
  constexpr std::size_t kBytes = 1'000'000;
  constexpr std::uint32_t kModulus = 16;
  if (run.opts().jitter == JitterKind::scripted) {
    rep.skipped = "elapsed-tick streams need the real clock; scripted jitter replays fixed ticks";
    return;
  }
  std::optional<std::uint64_t> fixed_tick;
  if (std::getenv(kTickEnvVar) != nullptr) {
    fixed_tick = with_env_overrides({}).tick_ns;
    rep.notes.push_back("tick_ns " + std::to_string(*fixed_tick) + " from " + kTickEnvVar);
  }
  const std::size_t n = run.runs(run.opts().scale == Scale::full ? 10 : 2);
  for (double mu : {100.0, 200.0}) {
    const auto& ref = mu == 100.0 ? kElapsedMu100 : kElapsedMu200;
    for (std::size_t r = 0; r < n; ++r) {
      run.progress("mu " + fmt(mu) + " run " + std::to_string(r + 1) + "/" + std::to_string(n));
      auto cfg = run.config(mu);
      if (fixed_tick) {
        cfg.tick_ns = *fixed_tick;
      } else {
        // fresh pilot right before each run; its output is thrown away
        const auto cal = calibrate_elapsed_tick(cfg, run.run_seed(r, 0xca1 + static_cast<std::uint32_t>(mu)));
        cfg.tick_ns = cal.best_tick_ns;
        const auto& probe = cal.probes[cal.best_tick_ns - 1];
        rep.notes.push_back("mu " + fmt(mu) + " run " + std::to_string(r + 1) + ": pilot tick_ns " +
                            std::to_string(cfg.tick_ns) + " (worst-segment chi-square " +
                            fmt(probe.chi_square, 4) + (cal.tick_ns ? " < " : " >= ") +
                            fmt(probe.critical, 4) + ")");
      }
      auto engine = RpssEngine::from_seed(cfg, run.run_seed(r, static_cast<std::uint32_t>(mu)));
      const auto s = analyze_stream(generate_bytes(engine, StreamSource::elapsed, kModulus, kBytes));
      const auto* row = r < ref.size() ? &ref[r] : nullptr;
      const std::string tag = "mu " + fmt(mu) + " run " + std::to_string(r + 1) + " ";
      rep.checks.push_back(at_least(tag + "shannon", s.shannon_bits_per_byte,
                                    row ? std::optional(row->shannon) : std::nullopt, kElapsedShannonFloor));
      rep.checks.push_back(at_least(tag + "min-entropy", s.min_entropy_bits_per_byte,
                                    row ? std::optional(row->min_entropy) : std::nullopt,
                                    kElapsedMinEntropyFloor));
    }
  }
}

void large_scale_table(const Runner& run, ReproduceReport& rep) {
  const std::size_t rows = run.opts().scale == Scale::full ? kLargeScale.size() : 1;
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = kLargeScale[i];
    for (auto [mu, modulus] : {std::pair{7.0, 4u}, std::pair{100.0, 16u}}) {
      run.progress("mu " + fmt(mu) + " " + std::to_string(row.bytes) + " bytes");
      auto engine = RpssEngine::from_seed(run.config(mu), run.run_seed(i, 7 + modulus));
      ByteHistogram hist{};
      stream_bytes(engine, StreamSource::counts, modulus, row.bytes, [&](std::span<const std::uint8_t> c) {
        const auto h = byte_histogram(c);
        for (std::size_t b = 0; b < 256; ++b) hist[b] += h[b];
      });
      const auto s = analyze_histogram(hist);
      const auto& ref = mu == 7.0 ? row.mu7 : row.mu100;
      const std::string tag = "mu " + fmt(mu) + " M=" + std::to_string(modulus) + " " +
                              std::to_string(row.bytes) + " bytes ";
      rep.checks.push_back(at_least(tag + "shannon", s.shannon_bits_per_byte, ref.shannon, row.shannon_floor));
      if (row.min_entropy_floor) {
        rep.checks.push_back(
            at_least(tag + "min-entropy", s.min_entropy_bits_per_byte, ref.min_entropy, *row.min_entropy_floor));
      } else {
        rep.notes.push_back(tag + "min-entropy " + fmt(s.min_entropy_bits_per_byte) + " (reference " +
                            fmt(ref.min_entropy) + ", no threshold)");
      }
    }
  }
}

}  // namespace

std::string per_byte_report_text(double mu, std::uint32_t modulus) {
  const auto b = per_byte_report(mu, modulus);
  std::string s = "mu " + fmt(mu) + ", M " + std::to_string(modulus) + ": deviation bound " +
                  fmt(b.deviation_bound, 4) + ", min-entropy bound " + fmt(b.min_entropy_per_sample) +
                  " bits/sample";
  if (b.min_entropy_per_byte) s += ", " + fmt(*b.min_entropy_per_byte) + " bits/byte";
  if (auto ref = reference_byte_entropy(mu, modulus)) s += " (reference table: " + fmt(*ref) + ")";
  return s;
}

Table parse_table(std::string_view text) {
  static constexpr std::array<std::pair<std::string_view, Table>, 12> kNames = {{
      {"II", Table::II}, {"2", Table::II}, {"III", Table::III}, {"3", Table::III},
      {"IV", Table::IV}, {"4", Table::IV}, {"V", Table::V},     {"5", Table::V},
      {"VI", Table::VI}, {"6", Table::VI}, {"VII", Table::VII}, {"7", Table::VII},
  }};
  for (const auto& [name, t] : kNames) {
    if (name == text) return t;
  }
  throw std::invalid_argument("unknown table '" + std::string(text) + "' (expected II..VII)");
}

std::string_view to_string(Table table) noexcept {
  switch (table) {
    case Table::II: return "II";
    case Table::III: return "III";
    case Table::IV: return "IV";
    case Table::V: return "V";
    case Table::VI: return "VI";
    case Table::VII: return "VII";
  }
  return "?";
}

Scale parse_scale(std::string_view text) {
  if (text == "desk") return Scale::desk;
  if (text == "full") return Scale::full;
  throw std::invalid_argument("unknown scale '" + std::string(text) + "' (expected desk|full)");
}

bool ReproduceReport::passed() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::vector<std::uint8_t> os_seed() {
  std::random_device rd;
  std::vector<std::uint8_t> s(32);
  for (std::size_t i = 0; i < s.size(); i += 4) {
    const auto w = rd();
    for (std::size_t b = 0; b < 4; ++b) s[i + b] = static_cast<std::uint8_t>(w >> (8 * b));
  }
  return s;
}

ReproduceReport reproduce(const ReproduceOptions& options) {
  Runner run(options);
  ReproduceReport rep;
  rep.title = "table " + std::string(to_string(options.table)) + " (" +
              (options.scale == Scale::full ? "full" : "desk") + " scale, " +
              std::string(to_string(options.jitter)) + " jitter)";
  if (options.jitter == JitterKind::scripted) {
    rep.notes.push_back("mocked jitter: unpredictability claims not exercised");
  }
  switch (options.table) {
    case Table::II: moment_table(run, rep, 7.0, kMomentsMu7, kEnvelopeMu7); break;
    case Table::III: moment_table(run, rep, 100.0, kMomentsMu100, kEnvelopeMu100); break;
    case Table::IV: uniformity_table(run, rep, 7.0, 4, kUniformityMu7); break;
    case Table::V: uniformity_table(run, rep, 100.0, 16, kUniformityMu100); break;
    case Table::VI: elapsed_table(run, rep); break;
    case Table::VII: large_scale_table(run, rep); break;
  }
  return rep;
}

}  // namespace dcqrng
