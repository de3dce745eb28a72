#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "idp/binning.hpp"
#include "idp/hilbert.hpp"
#include "idp/net.hpp"
#include "idp/qvector.hpp"
#include "idp/rng.hpp"
#include "idp/sieve.hpp"
#include "idp/simplex.hpp"

namespace {

idp::QVector bench_q() { return idp::QVector::parse("4,10,14,14"); }

void BM_FppPoints(benchmark::State& state) {
  const idp::QVector q = bench_q();
  for (auto _ : state) {
    benchmark::DoNotOptimize(idp::fpp_points(q));
  }
}
BENCHMARK(BM_FppPoints);

void BM_HilbertBasis(benchmark::State& state) {
  const idp::QVector q = bench_q();
  for (auto _ : state) {
    benchmark::DoNotOptimize(idp::hilbert_basis(q));
  }
}
BENCHMARK(BM_HilbertBasis);

void BM_IsIdpBins(benchmark::State& state) {
  const idp::QVector q = bench_q();
  for (auto _ : state) {
    benchmark::DoNotOptimize(idp::is_idp_bins(q));
  }
}
BENCHMARK(BM_IsIdpBins);

void BM_Hib(benchmark::State& state) {
  const idp::QVector q = bench_q();
  const idp::RelevantSet relevant = idp::RelevantSet::build(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(idp::hib(q, relevant));
  }
}
BENCHMARK(BM_Hib);

void BM_RelevantSetBuild(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(idp::RelevantSet::build(d));
  }
}
BENCHMARK(BM_RelevantSetBuild)->Arg(2)->Arg(3)->Arg(4);

idp::Params bench_net(std::int32_t d, std::int32_t out) {
  idp::NetSpec spec;
  spec.widths = {d, 100, 400, 800, out};
  spec.seed = 7;
  return idp::init_params(spec);
}

void BM_Forward(benchmark::State& state) {
  const idp::RelevantSet relevant = idp::RelevantSet::build(4);
  const idp::Params p =
      bench_net(4, static_cast<std::int32_t>(relevant.size()));
  const std::vector<double> x{0.16, 0.40, 0.56, 0.56};
  idp::ForwardCache cache;
  for (auto _ : state) {
    idp::forward(p, x, cache);
    benchmark::DoNotOptimize(cache.logits);
  }
}
BENCHMARK(BM_Forward);

void BM_Backward(benchmark::State& state) {
  const idp::RelevantSet relevant = idp::RelevantSet::build(4);
  const idp::Params p =
      bench_net(4, static_cast<std::int32_t>(relevant.size()));
  const std::vector<double> x{0.16, 0.40, 0.56, 0.56};
  std::vector<double> y(relevant.size(), 0.0);
  y[0] = 1.0;
  idp::Gradient grad;
  for (auto _ : state) {
    benchmark::DoNotOptimize(idp::backward(p, x, y, idp::Loss::kBce, 10.0, grad));
  }
}
BENCHMARK(BM_Backward);

void BM_PredictIdp(benchmark::State& state) {
  const idp::RelevantSet relevant = idp::RelevantSet::build(4);
  const idp::Params p =
      bench_net(4, static_cast<std::int32_t>(relevant.size()));
  const idp::QVector q = bench_q();
  for (auto _ : state) {
    benchmark::DoNotOptimize(idp::predict_idp(p, q, 25, 0.5, 3));
  }
}
BENCHMARK(BM_PredictIdp);

void BM_ScanGrid(benchmark::State& state) {
  const idp::RelevantSet relevant = idp::RelevantSet::build(2);
  idp::NetSpec spec;
  spec.widths = {2, 16, static_cast<std::int32_t>(relevant.size())};
  spec.seed = 7;
  const idp::Params p = idp::init_params(spec);
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        idp::scan_grid(p, 2, 40, 0.5, 2, false, false, threads));
  }
}
BENCHMARK(BM_ScanGrid)->Arg(1)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
