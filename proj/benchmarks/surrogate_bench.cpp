#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "qboost/dataset.hpp"
#include "qboost/gbqr.hpp"
#include "qboost/neighbors.hpp"
#include "qboost/projection.hpp"
#include "qboost/random.hpp"
#include "qboost/rf_surrogate.hpp"

namespace {

using qboost::Dataset;
using Points = std::vector<std::vector<double>>;

Points uniform_points(std::size_t n, std::size_t dims, std::uint64_t seed) {
  qboost::Rng rng = qboost::make_rng(seed);
  Points pts(n, std::vector<double>(dims));
  for (auto& p : pts) {
    for (double& x : p) x = qboost::uniform01(rng);
  }
  return pts;
}

Dataset bump_data(std::size_t n, std::size_t dims, std::uint64_t seed) {
  qboost::Rng rng = qboost::make_rng(seed);
  Dataset d(dims);
  for (const auto& p : uniform_points(n, dims, seed)) {
    double r2 = 0.0;
    for (double x : p) r2 += (x - 0.3) * (x - 0.3);
    d.add(p, std::exp(-4.0 * r2) + 0.05 * qboost::standard_normal(rng));
  }
  return d;
}

void BM_GbqrFit(benchmark::State& state) {
  const Dataset d = bump_data(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(qboost::GbqrModel::fit(d, {}));
}
BENCHMARK(BM_GbqrFit)->ArgsProduct({{100, 200, 400, 800, 1600}, {2, 4, 8}})->Unit(benchmark::kMillisecond);

void BM_GbqrPredictBatch(benchmark::State& state) {
  const auto dims = static_cast<std::size_t>(state.range(1));
  const auto model = qboost::GbqrModel::fit(bump_data(static_cast<std::size_t>(state.range(0)), dims, 2), {});
  const Points batch = uniform_points(10000, dims, 3);
  for (auto _ : state) benchmark::DoNotOptimize(model.predict_batch(batch));
}
BENCHMARK(BM_GbqrPredictBatch)->ArgsProduct({{200, 1600}, {2, 8}})->Unit(benchmark::kMillisecond);

void BM_RfFit(benchmark::State& state) {
  const Dataset d = bump_data(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(qboost::RfModel::fit(d, {}, 5));
}
BENCHMARK(BM_RfFit)->ArgsProduct({{100, 400, 1600}, {2, 8}})->Unit(benchmark::kMillisecond);

void BM_RfPredictBatch(benchmark::State& state) {
  const auto dims = static_cast<std::size_t>(state.range(1));
  const auto model = qboost::RfModel::fit(bump_data(static_cast<std::size_t>(state.range(0)), dims, 6), {}, 7);
  const Points batch = uniform_points(10000, dims, 8);
  for (auto _ : state) benchmark::DoNotOptimize(model.predict_batch(batch));
}
BENCHMARK(BM_RfPredictBatch)->ArgsProduct({{200, 1600}, {2, 8}})->Unit(benchmark::kMillisecond);

void BM_KdBuild(benchmark::State& state) {
  const Points pts = uniform_points(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 9);
  for (auto _ : state) benchmark::DoNotOptimize(qboost::KdIndex(pts));
}
BENCHMARK(BM_KdBuild)->ArgsProduct({{100, 1000}, {2, 4, 8}})->Unit(benchmark::kMicrosecond);

// args: observed points, dims, epsilon in tenths
void BM_KdQueryBatch(benchmark::State& state) {
  const auto dims = static_cast<std::size_t>(state.range(1));
  const qboost::KdIndex index(uniform_points(static_cast<std::size_t>(state.range(0)), dims, 10));
  const Points batch = uniform_points(10000, dims, 11);
  const double eps = static_cast<double>(state.range(2)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(index.nearest_batch(batch, eps));
}
BENCHMARK(BM_KdQueryBatch)
    ->ArgsProduct({{100, 1000}, {2, 4, 8}, {0}})
    ->Args({1000, 8, 5})
    ->Args({1000, 8, 10})
    ->Unit(benchmark::kMillisecond);

void BM_PcaProjectAndQuery(benchmark::State& state) {
  const Points observed = uniform_points(static_cast<std::size_t>(state.range(0)), 8, 12);
  const Points batch = uniform_points(10000, 8, 13);
  for (auto _ : state) {
    const auto pca = qboost::PcaMap::fit(observed, 2);
    Points projected;
    projected.reserve(observed.size());
    for (const auto& p : observed) projected.push_back(pca.project(p));
    const qboost::KdIndex index(projected);
    double sum = 0.0;
    for (const auto& q : batch) sum += index.nearest(pca.project(q)).distance;
    benchmark::DoNotOptimize(sum);
  }
}
BENCHMARK(BM_PcaProjectAndQuery)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
