#include "dcqrng/rpss.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace dcqrng {

std::string_view to_string(JitterKind kind) noexcept {
  return kind == JitterKind::scripted ? "scripted" : "real-clock";
}

JitterKind parse_jitter_kind(std::string_view text) {
  if (text == "real" || text == "real-clock") return JitterKind::real_clock;
  if (text == "scripted") return JitterKind::scripted;
  throw std::invalid_argument("unknown jitter source '" + std::string(text) + "'");
}

void RpssConfig::validate() const {
  if (array_length < 2) throw std::invalid_argument("array_length must be >= 2");
  if (tick_ns == 0) throw std::invalid_argument("tick_ns must be >= 1");
  if (advance_cap == 0) throw std::invalid_argument("advance_cap must be >= 1");
  if (jitter == JitterKind::scripted && script_ticks.empty()) {
    throw std::invalid_argument("scripted jitter needs at least one tick value");
  }
  if (!(mu > 0.0) || mu > kMaxPoissonMean) {
    throw std::invalid_argument("mu must lie in (0, " + std::to_string(kMaxPoissonMean) + "]");
  }
}

RpssConfig with_env_overrides(RpssConfig config) {
  if (const char* raw = std::getenv(kTickEnvVar); raw != nullptr && *raw != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (*end != '\0' || v == 0 || raw[0] == '-') {
      throw std::invalid_argument(std::string(kTickEnvVar) + " must be a positive integer, got '" +
                                  raw + "'");
    }
    config.tick_ns = v;
  }
  return config;
}

std::int64_t steady_clock_ns() noexcept {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void SteadyClockJitter::extra_read() { sink_ = steady_clock_ns(); }

ScriptedJitter::ScriptedJitter(std::vector<std::int64_t> elapsed_ns) : elapsed_(std::move(elapsed_ns)) {
  if (elapsed_.empty()) throw std::invalid_argument("scripted jitter needs at least one value");
}

std::unique_ptr<ScriptedJitter> ScriptedJitter::from_ticks(std::span<const std::uint64_t> ticks,
                                                           std::uint64_t tick_ns) {
  std::vector<std::int64_t> ns;
  ns.reserve(ticks.size());
  for (auto t : ticks) ns.push_back(static_cast<std::int64_t>(t * tick_ns));
  return std::make_unique<ScriptedJitter>(std::move(ns));
}

std::int64_t ScriptedJitter::burst_end() {
  const std::int64_t end = now_ + elapsed_[cursor_];
  cursor_ = (cursor_ + 1) % elapsed_.size();
  // time keeps moving forward between bursts even after a backwards step
  now_ = std::max(now_, end) + 1;
  return end;
}

std::unique_ptr<JitterSource> make_jitter_source(const RpssConfig& config) {
  if (config.jitter == JitterKind::scripted) {
    return ScriptedJitter::from_ticks(config.script_ticks, config.tick_ns);
  }
  return std::make_unique<SteadyClockJitter>();
}

RpssEngine::RpssEngine(RpssConfig config, GeneratorState gen, GeneratorState obf_gen,
                       std::unique_ptr<JitterSource> jitter)
    : config_((config.validate(), std::move(config))),
      poisson_(config_.mu),
      gen_(gen),
      obf_gen_(obf_gen),
      jitter_(jitter ? std::move(jitter) : make_jitter_source(config_)),
      array_(config_.array_length) {
  std::iota(array_.begin(), array_.end(), 0u);
}

RpssEngine RpssEngine::from_seed(RpssConfig config, std::span<const std::uint8_t> seed,
                                 std::unique_ptr<JitterSource> jitter) {
  auto gen = GeneratorState::seed(seed);
  std::vector<std::uint8_t> obf_material(seed.begin(), seed.end());
  for (char c : std::string_view("dcqrng/obfuscation")) obf_material.push_back(static_cast<std::uint8_t>(c));
  auto obf = GeneratorState::seed(obf_material);
  return RpssEngine(std::move(config), gen, obf, std::move(jitter));
}

void RpssEngine::shuffle_once() {
  for (std::size_t i = array_.size() - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(gen_.next_int(i + 1));
    std::swap(array_[i], array_[j]);
  }
}

RpssCycleRecord RpssEngine::run_cycle() {
  RpssCycleRecord rec;
  rec.cycle_index = diag_.cycles;
  rec.n_p = poisson_.sample(gen_);
  const std::uint64_t obf_mod = std::max<std::uint64_t>(rec.n_p, 1);

  const std::int64_t t0 = jitter_->burst_start();
  std::atomic_signal_fence(std::memory_order_seq_cst);
  for (std::uint64_t s = 0; s < rec.n_p; ++s) {
    if (config_.obfuscation_enabled && obf_gen_.next() % obf_mod == 0) {
      jitter_->extra_read();
      ++diag_.obfuscation_reads;
    }
    shuffle_once();
  }
  std::atomic_signal_fence(std::memory_order_seq_cst);
  const std::int64_t t1 = jitter_->burst_end();

  if (t1 < t0) {
    ++diag_.nonmonotonic_intervals;
    rec.n_t = 0;
  } else {
    const auto elapsed = static_cast<std::uint64_t>(t1 - t0);
    rec.n_t = elapsed / config_.tick_ns + (elapsed % config_.tick_ns != 0 ? 1 : 0);
  }
  if (gen_.advance_capped(rec.n_t, config_.advance_cap)) ++diag_.folded_advances;
  ++diag_.cycles;
  return rec;
}

void RpssEngine::finish_security_phase() {
  if (secured_) return;
  for (std::uint64_t i = 0; i < config_.security_discard; ++i) {
    run_cycle();
    ++diag_.discarded;
  }
  secured_ = true;
}

std::vector<std::uint64_t> RpssEngine::generate_counts(std::size_t count) {
  if (count == 0) throw std::invalid_argument("count must be >= 1");
  std::vector<std::uint64_t> out;
  out.reserve(count);
  generate(count, [&](const RpssCycleRecord& r) { out.push_back(r.n_p); });
  return out;
}

std::vector<std::uint64_t> RpssEngine::generate_elapsed(std::size_t count) {
  if (count == 0) throw std::invalid_argument("count must be >= 1");
  std::vector<std::uint64_t> out;
  out.reserve(count);
  generate(count, [&](const RpssCycleRecord& r) { out.push_back(r.n_t); });
  return out;
}

TickCalibration calibrate_tick(const std::function<std::int64_t()>& read_ns, std::size_t trials) {
  TickCalibration cal;
  cal.trials = trials;
  std::vector<std::uint64_t> positive;
  positive.reserve(trials);
  std::int64_t prev = read_ns();
  for (std::size_t i = 0; i < trials; ++i) {
    const std::int64_t now = read_ns();
    const std::int64_t d = now - prev;
    prev = now;
    if (d > 0) {
      positive.push_back(static_cast<std::uint64_t>(d));
    } else if (d == 0) {
      ++cal.zero_deltas;
    } else {
      ++cal.negative_deltas;
    }
  }
  if (positive.empty()) return cal;

  std::uint64_t g = 0;
  for (auto d : positive) g = std::gcd(g, d);
  cal.granularity_ns = g;
  std::sort(positive.begin(), positive.end());
  cal.min_positive_ns = positive.front();
  cal.median_positive_ns = positive[positive.size() / 2];
  cal.p99_positive_ns = positive[std::min(positive.size() - 1, positive.size() * 99 / 100)];
  cal.recommended_tick_ns = std::max<std::uint64_t>(g, 1);
  return cal;
}

double chi_square_critical_001(unsigned dof) {
  constexpr double z = 3.090232306167813;  // standard normal 0.999 quantile
  const double k = dof;
  const double a = 2.0 / (9.0 * k);
  const double c = 1.0 - a + z * std::sqrt(a);
  return k * c * c * c;
}

ElapsedTickCalibration calibrate_elapsed_tick(RpssConfig config, std::span<const std::uint8_t> seed,
                                              std::size_t pilot_cycles, std::uint32_t modulus,
                                              std::uint64_t max_tick_ns, std::size_t segments) {
  if (modulus < 2) throw std::invalid_argument("modulus must be >= 2");
  if (segments == 0 || pilot_cycles < segments * modulus * 5) {
    throw std::invalid_argument("pilot too short for the requested segments");
  }
  if (max_tick_ns == 0) throw std::invalid_argument("max_tick_ns must be >= 1");
  config.tick_ns = 1;
  config.jitter = JitterKind::real_clock;
  auto engine = RpssEngine::from_seed(config, seed);
  const auto elapsed_ns = engine.generate_elapsed(pilot_cycles);
  const std::size_t per_segment = pilot_cycles / segments;

  ElapsedTickCalibration out;
  const double critical = chi_square_critical_001(modulus - 1);
  const double expected = static_cast<double>(per_segment) / modulus;
  std::vector<std::uint64_t> bins(modulus);
  double best = 0.0;
  for (std::uint64_t tick = 1; tick <= max_tick_ns; ++tick) {
    double worst = 0.0;
    for (std::size_t seg = 0; seg < segments; ++seg) {
      std::fill(bins.begin(), bins.end(), 0);
      for (std::size_t i = seg * per_segment; i < (seg + 1) * per_segment; ++i) {
        const auto ns = elapsed_ns[i];
        ++bins[(ns / tick + (ns % tick != 0 ? 1 : 0)) % modulus];
      }
      double stat = 0.0;
      for (auto b : bins) {
        const double d = static_cast<double>(b) - expected;
        stat += d * d / expected;
      }
      worst = std::max(worst, stat);
    }
    out.probes.push_back({tick, worst, critical, worst < critical});
    if (tick == 1 || worst < best) {
      best = worst;
      out.best_tick_ns = tick;
    }
  }
  if (best < critical) out.tick_ns = out.best_tick_ns;
  return out;
}

}  // namespace dcqrng
