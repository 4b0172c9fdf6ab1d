// Vectorized/parallel kernels against the scalar serial references.

#include <benchmark/benchmark.h>

#include <vector>

#include "ccsketch/decoder.hpp"
#include "ccsketch/experiment.hpp"
#include "ccsketch/sketch.hpp"

namespace {

using namespace ccsketch;

constexpr std::uint64_t kM = 256;

void BM_DesignEntriesReference(benchmark::State& state) {
  const DesignSpec spec{1 << 20, kM, AlphaParam(0.05), 7};
  std::uint64_t i = 0;
  double sink = 0.0;
  for (auto _ : state) {
    for (std::uint64_t j = 0; j < kM; ++j) sink += reference::design_entry(spec, i, j);
    ++i;
  }
  benchmark::DoNotOptimize(sink);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * kM));
}
BENCHMARK(BM_DesignEntriesReference);

void BM_DesignEntriesKernel(benchmark::State& state) {
  const DesignSpec spec{1 << 20, kM, AlphaParam(0.05), 7};
  std::vector<double> column(padded_length(kM));
  std::uint64_t i = 0;
  for (auto _ : state) {
    design_segment(spec, i++, 0, column);
    benchmark::DoNotOptimize(column.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * kM));
}
BENCHMARK(BM_DesignEntriesKernel);

MeasurementVector sample_measurements(std::uint64_t n) {
  const DesignSpec spec{n, 162, AlphaParam(0.05), 11};
  return encode(generate_workload(n, 10, 3, 0), spec);
}

void BM_DecodeReference(benchmark::State& state) {
  const auto y = sample_measurements(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::decode_all(y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DecodeReference)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_DecodeParallel(benchmark::State& state) {
  const auto y = sample_measurements(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(decode_all(y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DecodeParallel)->Arg(2000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
