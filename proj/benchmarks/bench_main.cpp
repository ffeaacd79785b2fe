#include <benchmark/benchmark.h>

#include <random>

#include "diar/ahc.hpp"
#include "diar/fusion.hpp"
#include "diar/metrics.hpp"
#include "diar/providers.hpp"
#include "diar/spectral.hpp"
#include "diar/timeline.hpp"

using namespace diar;

namespace {

Timeline random_timeline(std::uint64_t seed, int speakers, int turns_per_speaker,
                         double span_seconds) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> onset(0.0, span_seconds);
  std::uniform_real_distribution<double> duration(0.5, 6.0);
  Timeline t("bench");
  for (int s = 0; s < speakers; ++s)
    for (int i = 0; i < turns_per_speaker; ++i) {
      double on = std::floor(onset(rng) * 100.0) / 100.0;
      double dur = std::floor(duration(rng) * 100.0) / 100.0;
      t.insert(Turn{"S" + std::to_string(s), on, dur});
    }
  return t;
}

std::vector<Embedding> random_embeddings(std::uint64_t seed, std::size_t n, std::size_t dim) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Embedding> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    for (double& x : v) x = gauss(rng);
    out.push_back(Embedding{std::move(v), {i * 0.32, i * 0.32 + 1.28}, "bench"});
  }
  return out;
}

void BM_ScoreDer(benchmark::State& state) {
  Timeline ref = random_timeline(1, static_cast<int>(state.range(0)), 40, 600.0);
  Timeline hyp = random_timeline(2, static_cast<int>(state.range(0)), 40, 600.0);
  for (auto _ : state) benchmark::DoNotOptimize(score_der(hyp, ref, 0.25, true));
}
BENCHMARK(BM_ScoreDer)->Arg(4)->Arg(8);

void BM_PlainAhc(benchmark::State& state) {
  auto embs = random_embeddings(3, static_cast<std::size_t>(state.range(0)), 128);
  for (auto _ : state) benchmark::DoNotOptimize(plain_ahc(embs, 0.62));
}
BENCHMARK(BM_PlainAhc)->Arg(64)->Arg(256);

void BM_EstimateSpeakerCount(benchmark::State& state) {
  auto embs = random_embeddings(4, static_cast<std::size_t>(state.range(0)), 64);
  CosineStubScorer scorer;
  AffinityMatrix affinity = build_affinity(embs, scorer, 64);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_speaker_count(affinity, 20));
}
BENCHMARK(BM_EstimateSpeakerCount)->Arg(64)->Arg(256);

void BM_Fuse(benchmark::State& state) {
  std::vector<Timeline> hyps{random_timeline(5, 4, 40, 600.0), random_timeline(6, 4, 40, 600.0),
                             random_timeline(7, 4, 40, 600.0)};
  FusionWeights weights = FusionWeights::rank_based();
  for (auto _ : state) benchmark::DoNotOptimize(fuse(hyps, weights));
}
BENCHMARK(BM_Fuse);

void BM_RttmRoundTrip(benchmark::State& state) {
  std::map<std::string, Timeline> m{{"bench", random_timeline(8, 6, 60, 1200.0)}};
  for (auto _ : state) benchmark::DoNotOptimize(parse_rttm(serialize_rttm(m)));
}
BENCHMARK(BM_RttmRoundTrip);

}  // namespace

BENCHMARK_MAIN();
