// Serial reference kernels against their OpenMP counterparts on a full
// 1600x2400 page.

#include <benchmark/benchmark.h>

#include "formpin/pipeline.hpp"
#include "formpin/raster.hpp"
#include "formpin/ransac.hpp"
#include "formpin/synthdoc.hpp"

namespace {

using namespace formpin;

const RenderedDocument& page() {
  static const auto doc = render_document(builtin_form(true));
  return doc;
}

const Homography& skew() {
  static const auto h = make_homography({5.0, 0.05, -0.03, 1.1, 1.1, {0.0, 0.0}}, 1600, 2400);
  return h;
}

void BM_WarpSerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(serial::warp_perspective(page().page, skew(), 1600, 2400));
  }
}
void BM_WarpParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(warp_perspective(page().page, skew(), 1600, 2400));
  }
}

void BM_ResizeSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(serial::resize_bilinear(page().page, 1200, 1800));
}
void BM_ResizeParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(resize_bilinear(page().page, 1200, 1800));
}

void BM_BinarizeSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(serial::binarize(page().page, 170));
}
void BM_BinarizeParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(binarize(page().page, 170));
}

void BM_XorSerial(benchmark::State& state) {
  const auto a = binarize(page().page);
  const auto b = binarize(warp_perspective(page().page, skew(), 1600, 2400));
  for (auto _ : state) benchmark::DoNotOptimize(serial::xor_diff(a, b));
}
void BM_XorParallel(benchmark::State& state) {
  const auto a = binarize(page().page);
  const auto b = binarize(warp_perspective(page().page, skew(), 1600, 2400));
  for (auto _ : state) benchmark::DoNotOptimize(xor_diff(a, b));
}

// Correspondences of the form against a perturbed copy, with outliers mixed
// in by pairing shifted test points.
std::vector<Correspondence> pairs() {
  PipelineConfig cfg;
  const auto ctx = PipelineContext::create(cfg);
  const PerturbationParams p{5.0, 0.05, -0.03, 1.1, 1.1, {0.0, 0.0}};
  const auto pert = perturb_document(page().page, p);
  const auto test_words = transform_sidecar(page().sidecar, skew(), 1600, 2400);
  const auto tmpl = prepare_page(page().page, page().sidecar, cfg);
  const auto test = prepare_page(pert.image, test_words, cfg);
  auto set = build_correspondences(tmpl.bin, tmpl.words, test.bin, test.words, ctx.tips,
                                   cfg.eligibility, cfg.neighborhood, ctx.lexicon)
                 .pairs;
  const std::size_t n = set.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    set.push_back({set[i].template_pt, set[(i * 7 + 3) % n].test_pt, set[i].tip, "x"});
  }
  return set;
}

void BM_RansacSerial(benchmark::State& state) {
  const auto p = pairs();
  RansacParams params;
  params.confidence = 0.999999;
  for (auto _ : state) benchmark::DoNotOptimize(serial::ransac_estimate(p, params));
}
void BM_RansacParallel(benchmark::State& state) {
  const auto p = pairs();
  RansacParams params;
  params.confidence = 0.999999;
  for (auto _ : state) benchmark::DoNotOptimize(ransac_estimate(p, params));
}

}  // namespace

BENCHMARK(BM_WarpSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WarpParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ResizeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResizeParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BinarizeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BinarizeParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_XorSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_XorParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RansacSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RansacParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
