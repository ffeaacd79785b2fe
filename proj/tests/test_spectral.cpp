#include <doctest.h>

#include <algorithm>
#include <random>

#include "diar/errors.hpp"
#include "diar/metrics.hpp"
#include "diar/spectral.hpp"
#include "oracles.hpp"

using namespace diar;

namespace {

Embedding emb(std::vector<double> v, double onset) {
  return Embedding{std::move(v), {onset, onset + 1.0}, "rec"};
}

// The affinity example's inline stub: s = (1 + cos) / 2.
class ShiftedCosineScorer : public PairwiseScorer {
 public:
  std::vector<double> score_row(const Embedding& anchor,
                                std::span<const Embedding> candidates) const override {
    std::vector<double> out;
    for (const Embedding& c : candidates)
      out.push_back(std::clamp(0.5 * (1.0 + cosine_similarity(anchor, c)), 0.0, 1.0));
    return out;
  }
};

AffinityMatrix block_diagonal(const std::vector<std::size_t>& sizes) {
  std::size_t n = 0;
  for (std::size_t s : sizes) n += s;
  AffinityMatrix a;
  a.n = n;
  a.symmetric = true;
  a.values.assign(n * n, 0.0);
  std::size_t base = 0;
  for (std::size_t s : sizes) {
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j) a.at(base + i, base + j) = 1.0;
    base += s;
  }
  return a;
}

}  // namespace

TEST_CASE("build_affinity trivial cases") {
  ShiftedCosineScorer scorer;
  auto one = build_affinity({emb({1, 0}, 0.0)}, scorer);
  REQUIRE(one.n == 1);
  CHECK(one.at(0, 0) == doctest::Approx(1.0));

  auto same = build_affinity({emb({1, 0}, 0.0), emb({1, 0}, 1.0)}, scorer);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(same.at(i, j) == doctest::Approx(1.0));
  CHECK(same.symmetric);
}

TEST_CASE("build_affinity is block-partition invariant") {
  ShiftedCosineScorer scorer;
  std::vector<Embedding> embs{emb({1, 0}, 0), emb({0, 1}, 1), emb({1, 1}, 2)};
  auto small_blocks = build_affinity(embs, scorer, 2);
  auto one_block = build_affinity(embs, scorer, 64);
  CHECK(small_blocks.values == one_block.values);
}

TEST_CASE("build_affinity validates scorer output") {
  class BadScorer : public PairwiseScorer {
   public:
    std::vector<double> score_row(const Embedding&,
                                  std::span<const Embedding> c) const override {
      return std::vector<double>(c.size(), 1.5);
    }
  };
  BadScorer bad;
  CHECK_THROWS_AS(build_affinity({emb({1, 0}, 0)}, bad), ValidationError);
  ShiftedCosineScorer ok;
  CHECK_THROWS_AS(build_affinity({}, ok), ValidationError);
  CHECK_THROWS_AS(build_affinity({emb({1, 0}, 0)}, ok, 1), ValidationError);
}

TEST_CASE("build_affinity symmetrizes asymmetric scorers") {
  // Scores depend on the anchor's onset, so the raw matrix is asymmetric.
  class AnchorBiasedScorer : public PairwiseScorer {
   public:
    std::vector<double> score_row(const Embedding& anchor,
                                  std::span<const Embedding> c) const override {
      return std::vector<double>(c.size(), anchor.segment.onset > 0.5 ? 0.8 : 0.4);
    }
  };
  AnchorBiasedScorer scorer;
  auto a = build_affinity({emb({1, 0}, 0.0), emb({0, 1}, 1.0)}, scorer);
  CHECK(a.at(0, 1) == doctest::Approx(0.6));
  CHECK(a.at(1, 0) == doctest::Approx(0.6));
}

TEST_CASE("estimate_speaker_count on block structures") {
  CHECK(estimate_speaker_count(block_diagonal({3, 3}), 20) == 2);
  CHECK(estimate_speaker_count(block_diagonal({2, 5, 3}), 20) == 3);

  // All-ones: one component.
  CHECK(estimate_speaker_count(block_diagonal({6}), 20) == 1);

  // Identity 5x5: fully degenerate spectrum; the gap rule lands on 4.
  AffinityMatrix eye;
  eye.n = 5;
  eye.symmetric = true;
  eye.values.assign(25, 0.0);
  for (std::size_t i = 0; i < 5; ++i) eye.at(i, i) = 1.0;
  CHECK(estimate_speaker_count(eye, 5) == 4);

  AffinityMatrix bad = block_diagonal({2, 2});
  bad.symmetric = false;
  CHECK_THROWS_AS(estimate_speaker_count(bad, 20), ValidationError);
}

TEST_CASE("estimate_speaker_count recovers randomized blocks" *
          doctest::description("property")) {
  std::mt19937_64 rng(555);
  std::uniform_int_distribution<std::size_t> blocks(2, 5);
  std::uniform_int_distribution<std::size_t> size(2, 6);
  for (int it = 0; it < 50; ++it) {
    std::vector<std::size_t> sizes(blocks(rng));
    for (auto& s : sizes) s = size(rng);
    CHECK(estimate_speaker_count(block_diagonal(sizes), 20) == sizes.size());
  }
}

TEST_CASE("kmeans_rows is deterministic and exact on separated rows") {
  // Three orthogonal row groups.
  std::vector<double> rows{1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1};
  auto labels = kmeans_rows(rows, 5, 3, 3);
  CHECK(labels[0] == labels[1]);
  CHECK(labels[2] == labels[3]);
  CHECK(labels[0] != labels[2]);
  CHECK(labels[4] != labels[0]);
  CHECK(labels[4] != labels[2]);
  CHECK(kmeans_rows(rows, 5, 3, 3) == labels);
  CHECK_THROWS_AS(kmeans_rows(rows, 5, 3, 0), ValidationError);
  CHECK_THROWS_AS(kmeans_rows(rows, 5, 3, 6), ValidationError);
}

TEST_CASE("spectral_diarize recovers alternating synthetic speakers") {
  auto rec = testing::make_synthetic_recording(11, 2, 0.0);
  SyntheticProvider provider(rec.truth, rec.models);
  CosineStubScorer scorer;
  Timeline out = spectral_diarize(rec.recording_id, rec.speech, provider, scorer);
  CHECK(out.speakers().size() == 2);
  DiarizationScore s = score_der(out, rec.truth.at(rec.recording_id), 0.0, true);
  CHECK(s.der == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("spectral_diarize forces one cluster on near-uniform affinity") {
  auto rec = testing::make_synthetic_recording(12, 1, 0.0);
  SyntheticProvider provider(rec.truth, rec.models);
  CosineStubScorer scorer;
  Timeline out = spectral_diarize(rec.recording_id, rec.speech, provider, scorer);
  CHECK(out.speakers().size() == 1);
}

TEST_CASE("spectral_diarize with pinned k matches exhaustive block labeling") {
  auto rec = testing::make_synthetic_recording(13, 3, 0.05);
  SyntheticProvider provider(rec.truth, rec.models);
  CosineStubScorer scorer;
  Timeline out =
      spectral_diarize(rec.recording_id, rec.speech, provider, scorer, ScConfig{}, 3);
  CHECK(out.speakers().size() == 3);
  CHECK(score_der(out, rec.truth.at(rec.recording_id), 0.0, true).der <= 5.0);

  CHECK_THROWS_AS(
      spectral_diarize(rec.recording_id, rec.speech, provider, scorer, ScConfig{}, 99),
      ValidationError);
  CHECK_THROWS_AS(spectral_diarize(rec.recording_id, {}, provider, scorer), ValidationError);
}

TEST_CASE("block recovery is reproducible run to run") {
  auto rec = testing::make_synthetic_recording(14, 4, 0.1);
  SyntheticProvider provider(rec.truth, rec.models);
  CosineStubScorer scorer;
  Timeline a = spectral_diarize(rec.recording_id, rec.speech, provider, scorer);
  Timeline b = spectral_diarize(rec.recording_id, rec.speech, provider, scorer);
  CHECK(a == b);
}

TEST_CASE("affinity file round trip") {
  AffinityMatrix a = block_diagonal({2, 2});
  std::string path = "test_affinity.aff";
  write_affinity_file(path, a);
  AffinityMatrix back = load_affinity_file(path);
  CHECK(back.n == a.n);
  CHECK(back.values == a.values);
  CHECK(back.symmetric);
  std::remove(path.c_str());
}
