// Parallel kernels against their serial references, plus sampler sweeps by thread count.

#include <benchmark/benchmark.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pmlda/features.hpp"
#include "pmlda/generative.hpp"
#include "pmlda/reference.hpp"
#include "pmlda/rng.hpp"
#include "pmlda/sampler.hpp"

using namespace pmlda;

namespace {

GrayImage noise_image(int h, int w) {
  GrayImage img(h, w);
  Rng rng = make_stream(1, StreamTag::test);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.uniform() * 256.0);
  return img;
}

Plane noise_plane(int h, int w) {
  Plane p(h, w);
  Rng rng = make_stream(2, StreamTag::test);
  for (auto& x : p.v) x = rng.uniform();
  return p;
}

void set_threads(benchmark::State& state) {
#ifdef _OPENMP
  omp_set_num_threads(static_cast<int>(state.range(1)));
#else
  (void)state;
#endif
}

void BM_Convolve(benchmark::State& state) {
  set_threads(state);
  const int n = static_cast<int>(state.range(0));
  const Plane in = noise_plane(n, n);
  const Kernel2D k = gaussian_kernel(2.0, 15, 15);
  for (auto _ : state) benchmark::DoNotOptimize(convolve(in, k));
  state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_ConvolveReference(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Plane in = noise_plane(n, n);
  const Kernel2D k = gaussian_kernel(2.0, 15, 15);
  for (auto _ : state) benchmark::DoNotOptimize(reference::convolve(in, k));
  state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_FilterBank(benchmark::State& state) {
  set_threads(state);
  const GrayImage img = noise_image(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(extract_filter_bank(img));
}

void BM_FilterBankReference(benchmark::State& state) {
  const GrayImage img = noise_image(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::extract_filter_bank(img));
}

void BM_IntensityEntropy(benchmark::State& state) {
  set_threads(state);
  const GrayImage img = noise_image(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(extract_intensity_entropy(img));
}

void BM_IntensityEntropyReference(benchmark::State& state) {
  const GrayImage img = noise_image(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::extract_intensity_entropy(img));
}

void BM_SamplerSweeps(benchmark::State& state) {
  GenSpec g;
  g.alpha = {1, 1};
  g.topics = {{{-4, -4}, {1, 1}}, {{6, 6}, {1, 1}}};
  g.D = 40;
  g.N = 200;
  g.seed = 3;
  const Corpus corpus = sample_corpus(g).corpus;
  SamplerConfig c;
  c.hp.alpha = {1, 1};
  c.hp.K = 2;
  c.hp.T = 20;
  c.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_inference(corpus, c));
  state.SetItemsProcessed(state.iterations() * c.hp.T);
}

}  // namespace

BENCHMARK(BM_Convolve)->ArgsProduct({{256, 512}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ConvolveReference)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FilterBank)->ArgsProduct({{128}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FilterBankReference)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IntensityEntropy)->ArgsProduct({{256}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_IntensityEntropyReference)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SamplerSweeps)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
