#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dcqrng/detprng.hpp"
#include "dcqrng/poisson.hpp"

namespace dcqrng {

enum class JitterKind { real_clock, scripted };

std::string_view to_string(JitterKind kind) noexcept;
// Accepts "real" / "real-clock" and "scripted"; throws std::invalid_argument.
JitterKind parse_jitter_kind(std::string_view text);

inline constexpr const char* kTickEnvVar = "DCQRNG_TICK_NS";

struct RpssConfig {
  std::uint32_t array_length = 4;
  double mu = 7.0;
  std::uint64_t security_discard = 1024;
  std::uint64_t tick_ns = 100;
  bool obfuscation_enabled = true;
  std::uint64_t advance_cap = kDefaultAdvanceCap;
  JitterKind jitter = JitterKind::real_clock;
  // Elapsed ticks replayed per burst when jitter == scripted (cycled).
  std::vector<std::uint64_t> script_ticks = {1};

  // Throws std::invalid_argument on L < 2, tick_ns == 0, advance_cap == 0,
  // an empty script, or a mean PoissonSpec rejects.
  void validate() const;
};

// Returns `config` with tick_ns replaced by $DCQRNG_TICK_NS when it is set.
RpssConfig with_env_overrides(RpssConfig config);

/// Timestamps around each permutation burst.
///
/// burst_start/burst_end bracket one burst and are read back to back with
/// the shuffles in between; extra_read is the obfuscation hook.
class JitterSource {
 public:
  virtual ~JitterSource() = default;
  virtual std::int64_t burst_start() = 0;
  virtual std::int64_t burst_end() = 0;
  virtual void extra_read() = 0;
};

std::int64_t steady_clock_ns() noexcept;

class SteadyClockJitter final : public JitterSource {
 public:
  std::int64_t burst_start() override { return steady_clock_ns(); }
  std::int64_t burst_end() override { return steady_clock_ns(); }
  void extra_read() override;

 private:
  volatile std::int64_t sink_ = 0;
};

// Replays a fixed list of burst durations in nanoseconds, cycling. Negative
// entries model a clock stepping backwards.
class ScriptedJitter final : public JitterSource {
 public:
  explicit ScriptedJitter(std::vector<std::int64_t> elapsed_ns);
  static std::unique_ptr<ScriptedJitter> from_ticks(std::span<const std::uint64_t> ticks,
                                                    std::uint64_t tick_ns);

  std::int64_t burst_start() override { return now_; }
  std::int64_t burst_end() override;
  void extra_read() override {}

 private:
  std::vector<std::int64_t> elapsed_;
  std::size_t cursor_ = 0;
  std::int64_t now_ = 0;
};

std::unique_ptr<JitterSource> make_jitter_source(const RpssConfig& config);

struct RpssCycleRecord {
  std::uint64_t n_p = 0;
  std::uint64_t n_t = 0;
  std::uint64_t cycle_index = 0;
};

struct RpssDiagnostics {
  std::uint64_t cycles = 0;
  std::uint64_t discarded = 0;
  std::uint64_t nonmonotonic_intervals = 0;
  std::uint64_t obfuscation_reads = 0;
  std::uint64_t folded_advances = 0;
};

/// Recursive permutation engine.
///
/// Each cycle draws a Poisson count from the generator, times that many
/// Fisher-Yates shuffles of a small array, and advances the generator by the
/// elapsed tick count. One instance is strictly single-threaded; independent
/// instances may run on separate threads.
class RpssEngine {
 public:
  // A null jitter source is replaced by make_jitter_source(config).
  RpssEngine(RpssConfig config, GeneratorState gen, GeneratorState obf_gen,
             std::unique_ptr<JitterSource> jitter = nullptr);

  // Seeds the main generator from `seed` and the obfuscation generator from
  // a domain-separated copy of it.
  static RpssEngine from_seed(RpssConfig config, std::span<const std::uint8_t> seed,
                              std::unique_ptr<JitterSource> jitter = nullptr);

  RpssCycleRecord run_cycle();

  // The first call on an engine first runs and drops security_discard cycles.
  std::vector<std::uint64_t> generate_counts(std::size_t count);
  std::vector<std::uint64_t> generate_elapsed(std::size_t count);

  // Next post-discard cycle.
  RpssCycleRecord next_output() {
    finish_security_phase();
    return run_cycle();
  }

  template <class Sink>
  void generate(std::size_t count, Sink&& sink) {
    for (std::size_t i = 0; i < count; ++i) sink(next_output());
  }

  const RpssConfig& config() const noexcept { return config_; }
  const RpssDiagnostics& diagnostics() const noexcept { return diag_; }
  const GeneratorState& generator() const noexcept { return gen_; }
  std::span<const std::uint32_t> permutation() const noexcept { return array_; }

 private:
  void finish_security_phase();
  void shuffle_once();

  RpssConfig config_;
  PoissonSpec poisson_;
  GeneratorState gen_;
  GeneratorState obf_gen_;
  std::unique_ptr<JitterSource> jitter_;
  std::vector<std::uint32_t> array_;
  RpssDiagnostics diag_;
  bool secured_ = false;
};

struct TickCalibration {
  std::uint64_t trials = 0;
  std::uint64_t zero_deltas = 0;
  std::uint64_t negative_deltas = 0;
  std::uint64_t min_positive_ns = 0;
  std::uint64_t median_positive_ns = 0;
  std::uint64_t p99_positive_ns = 0;
  // gcd of all positive deltas: the clock's increment, as opposed to the
  // cost of one read
  std::uint64_t granularity_ns = 0;
  std::uint64_t recommended_tick_ns = 1;
};

/// Reads `read_ns` trials + 1 times back to back and summarises the deltas.
TickCalibration calibrate_tick(const std::function<std::int64_t()>& read_ns,
                               std::size_t trials = 100000);

struct ElapsedTickProbe {
  std::uint64_t tick_ns = 0;
  double chi_square = 0.0;  // worst pilot segment
  double critical = 0.0;
  bool uniform = false;
};

struct ElapsedTickCalibration {
  std::vector<ElapsedTickProbe> probes;  // one per candidate tick
  std::uint64_t best_tick_ns = 1;        // smallest worst-segment chi-square
  std::optional<std::uint64_t> tick_ns;  // best_tick_ns, if it passed
};

/// Pilot run for elapsed-tick streams.
///
/// Burst durations on a fast host cluster at multiples of the time one
/// shuffle takes, and that period drifts, so a tick that makes
/// ceil(elapsed / tick) mod `modulus` flat at one moment can alias badly a
/// little later. The pilot times `pilot_cycles` real bursts of an engine
/// built from `config` (at 1 ns ticks), splits them into `segments` blocks,
/// and scores every candidate tick 1..max_tick_ns by its worst block's
/// chi-square. The pilot output is discarded.
ElapsedTickCalibration calibrate_elapsed_tick(RpssConfig config, std::span<const std::uint8_t> seed,
                                              std::size_t pilot_cycles = 400000,
                                              std::uint32_t modulus = 16,
                                              std::uint64_t max_tick_ns = 64,
                                              std::size_t segments = 4);

// Upper alpha = 0.001 point of chi-square with `dof` degrees of freedom
// (Wilson-Hilferty; high by under 1% for dof >= 7, under 0.5% for dof >= 15).
double chi_square_critical_001(unsigned dof);

}  // namespace dcqrng
