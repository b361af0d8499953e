// Serial reference kernels against their OpenMP counterparts.
//   ./dcqrng_bench --benchmark_filter=Histogram
// Set OMP_NUM_THREADS to vary the parallel side.

#include <benchmark/benchmark.h>

#include <vector>

#include "dcqrng/analysis.hpp"
#include "dcqrng/detprng.hpp"
#include "dcqrng/poisson.hpp"
#include "dcqrng/projection.hpp"

using namespace dcqrng;

namespace {

GeneratorState bench_gen() { return GeneratorState::seed(std::vector<std::uint8_t>(32, 0x5e)); }

std::vector<std::uint8_t> random_bytes(std::size_t n) {
  auto g = bench_gen();
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(g.next());
  return out;
}

std::vector<std::uint64_t> poisson_counts(std::size_t n) {
  auto g = bench_gen();
  const PoissonSpec spec(100.0);
  std::vector<std::uint64_t> out(n);
  for (auto& x : out) x = spec.sample(g);
  return out;
}

std::vector<std::uint32_t> residues(std::size_t n, std::uint32_t m) {
  auto g = bench_gen();
  std::vector<std::uint32_t> out(n);
  for (auto& r : out) r = static_cast<std::uint32_t>(g.next_int(m));
  return out;
}

template <auto Fn>
void BM_Histogram(benchmark::State& state) {
  const auto data = random_bytes(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(data));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}

template <auto Fn>
void BM_Moments(benchmark::State& state) {
  const auto data = poisson_counts(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(data));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}

template <auto Fn>
void BM_Pack(benchmark::State& state) {
  const auto data = residues(static_cast<std::size_t>(state.range(0)), 16);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(data, 16));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}

}  // namespace

BENCHMARK(BM_Histogram<byte_histogram_serial>)->Name("Histogram/serial")->Range(1 << 16, 1 << 24);
BENCHMARK(BM_Histogram<byte_histogram>)->Name("Histogram/omp")->Range(1 << 16, 1 << 24);
BENCHMARK(BM_Moments<moments_serial>)->Name("Moments/serial")->Range(1 << 16, 1 << 22);
BENCHMARK(BM_Moments<moments>)->Name("Moments/omp")->Range(1 << 16, 1 << 22);
BENCHMARK(BM_Pack<pack_bytes_serial>)->Name("Pack/serial")->Range(1 << 16, 1 << 22);
BENCHMARK(BM_Pack<pack_bytes>)->Name("Pack/omp")->Range(1 << 16, 1 << 22);

BENCHMARK_MAIN();
