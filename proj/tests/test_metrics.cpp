#include <doctest.h>

#include <random>

#include "diar/errors.hpp"
#include "diar/metrics.hpp"
#include "oracles.hpp"

using namespace diar;

namespace {

Timeline tl(const std::string& rec, std::initializer_list<Turn> turns) {
  Timeline t(rec);
  for (const Turn& turn : turns) t.insert(turn);
  return t;
}

}  // namespace

TEST_CASE("identical hypothesis scores zero DER") {
  Timeline ref = tl("rec", {{"A", 0.0, 10.0}, {"B", 12.0, 5.0}});
  DiarizationScore s = score_der(ref, ref, 0.0, true);
  CHECK(s.der == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(s.miss == 0.0);
  CHECK(s.false_alarm == 0.0);
  CHECK(s.confusion == 0.0);
  CHECK(s.total_reference_speech == doctest::Approx(15.0));
}

TEST_CASE("half-covered reference gives 50% miss") {
  Timeline ref = tl("rec", {{"A", 0.0, 10.0}});
  Timeline hyp = tl("rec", {{"A", 0.0, 5.0}});
  DiarizationScore s = score_der(hyp, ref, 0.0, true);
  CHECK(s.miss == doctest::Approx(50.0).epsilon(1e-9));
  CHECK(s.false_alarm == doctest::Approx(0.0));
  CHECK(s.confusion == doctest::Approx(0.0));
  CHECK(s.der == doctest::Approx(50.0).epsilon(1e-9));
}

TEST_CASE("DER is invariant under hypothesis label permutation") {
  Timeline ref = tl("rec", {{"A", 0.0, 4.0}, {"B", 4.0, 4.0}, {"C", 9.0, 2.0}});
  Timeline hyp = tl("rec", {{"X", 0.0, 4.0}, {"Y", 4.0, 4.0}, {"Z", 9.0, 2.0}});
  DiarizationScore s = score_der(hyp, ref, 0.0, true);
  CHECK(s.der == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(score_jer(hyp, ref, 0.0) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("collar removes boundary frames from scoring") {
  Timeline ref = tl("rec", {{"A", 1.0, 2.0}});
  Timeline hyp = tl("rec", {{"A", 1.1, 1.9}});  // clips 0.1 s at the onset
  DiarizationScore strict = score_der(hyp, ref, 0.0, true);
  CHECK(strict.miss > 0.0);
  DiarizationScore lenient = score_der(hyp, ref, 0.25, true);
  CHECK(lenient.der == doctest::Approx(0.0));
  // Scored reference time shrinks monotonically with the collar.
  CHECK(lenient.total_reference_speech < strict.total_reference_speech);
  DiarizationScore wider = score_der(hyp, ref, 0.5, true);
  CHECK(wider.total_reference_speech < lenient.total_reference_speech);
}

TEST_CASE("score_overlap=false drops overlapped reference frames") {
  Timeline ref = tl("rec", {{"A", 0.0, 10.0}, {"B", 4.0, 2.0}});
  Timeline hyp = tl("rec", {{"A", 0.0, 10.0}});  // misses B entirely
  DiarizationScore with_overlap = score_der(hyp, ref, 0.0, true);
  CHECK(with_overlap.miss > 0.0);
  DiarizationScore without = score_der(hyp, ref, 0.0, false);
  CHECK(without.miss == doctest::Approx(0.0));
  CHECK(without.total_reference_speech == doctest::Approx(8.0));  // 10 - 2 overlapped
}

TEST_CASE("score_der error surface") {
  Timeline ref = tl("rec", {{"A", 0.0, 1.0}});
  CHECK_THROWS_AS(score_der(tl("other", {{"A", 0.0, 1.0}}), ref, 0.0, true), ValidationError);
  CHECK_THROWS_AS(score_der(ref, Timeline("rec"), 0.0, true), ValidationError);
}

TEST_CASE("score components match the brute-force oracle" * doctest::description("property")) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> n_turns(1, 6);
  std::uniform_int_distribution<long long> onset(0, 1500);
  std::uniform_int_distribution<long long> duration(20, 400);
  std::uniform_int_distribution<int> n_spk(1, 4);
  std::uniform_int_distribution<int> collar_pick(0, 2);
  const double collars[] = {0.0, 0.1, 0.25};

  for (int it = 0; it < 60; ++it) {
    Timeline ref("rec"), hyp("rec");
    int rs = n_spk(rng), hs = n_spk(rng);
    for (int i = 0; i < n_turns(rng) + 1; ++i)
      ref.insert(Turn{"R" + std::to_string(i % rs), onset(rng) / 100.0, duration(rng) / 100.0});
    for (int i = 0; i < n_turns(rng); ++i)
      hyp.insert(Turn{"H" + std::to_string(i % hs), onset(rng) / 100.0, duration(rng) / 100.0});
    double collar = collars[collar_pick(rng)];
    bool overlap = it % 2 == 0;

    testing::BruteDer expected;
    try {
      expected = testing::brute_force_der(hyp, ref, collar, overlap);
    } catch (const ValidationError&) {
      CHECK_THROWS_AS(score_der(hyp, ref, collar, overlap), ValidationError);
      continue;
    }
    DiarizationScore got = score_der(hyp, ref, collar, overlap);
    CHECK(got.miss == doctest::Approx(expected.miss).epsilon(1e-6));
    CHECK(got.false_alarm == doctest::Approx(expected.false_alarm).epsilon(1e-6));
    CHECK(got.confusion == doctest::Approx(expected.confusion).epsilon(1e-6));
    CHECK(got.der == doctest::Approx(expected.der).epsilon(1e-6));
    CHECK(got.der ==
          doctest::Approx(got.miss + got.false_alarm + got.confusion).epsilon(1e-12));
  }
}

TEST_CASE("JER identity and missing-speaker cases") {
  Timeline ref = tl("rec", {{"A", 0.0, 10.0}, {"B", 20.0, 10.0}});
  CHECK(score_jer(ref, ref, 0.0) == doctest::Approx(0.0));

  Timeline hyp = tl("rec", {{"A", 0.0, 10.0}});  // B entirely absent
  CHECK(score_jer(hyp, ref, 0.0) == doctest::Approx(50.0));

  CHECK_THROWS_AS(score_jer(hyp, Timeline("rec"), 0.0), ValidationError);
}

TEST_CASE("JER partial overlap by hand") {
  // intersection 5, union 15 -> 1 - 5/15 = 66.67%
  Timeline ref = tl("rec", {{"A", 0.0, 10.0}});
  Timeline hyp = tl("rec", {{"A", 5.0, 10.0}});
  CHECK(score_jer(hyp, ref, 0.0) == doctest::Approx(100.0 * (1.0 - 5.0 / 15.0)).epsilon(1e-6));
}

TEST_CASE("score_vad hand-computed fixtures") {
  VadScore perfect = score_vad({{0.0, 5.0}}, {{0.0, 5.0}}, 10.0);
  CHECK(perfect.false_alarm == doctest::Approx(0.0));
  CHECK(perfect.miss == doctest::Approx(0.0));
  CHECK(perfect.accuracy == doctest::Approx(100.0));

  VadScore all_speech = score_vad({{0.0, 10.0}}, {{0.0, 5.0}}, 10.0);
  CHECK(all_speech.false_alarm == doctest::Approx(100.0));
  CHECK(all_speech.miss == doctest::Approx(0.0));
  CHECK(all_speech.accuracy == doctest::Approx(50.0));

  VadScore silent = score_vad({}, {{0.0, 5.0}}, 10.0);
  CHECK(silent.false_alarm == doctest::Approx(0.0));
  CHECK(silent.miss == doctest::Approx(100.0));
  CHECK(silent.accuracy == doctest::Approx(50.0));
}

TEST_CASE("score_vad validation") {
  CHECK_THROWS_AS(score_vad({}, {}, 0.0), ValidationError);
  CHECK_THROWS_AS(score_vad({{0.0, 11.0}}, {}, 10.0), ValidationError);
}

TEST_CASE("vad accuracy identity" * doctest::description("property")) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long long> point(0, 990);
  std::uniform_int_distribution<long long> len(1, 300);
  for (int it = 0; it < 200; ++it) {
    auto make = [&]() {
      std::vector<Interval> iv;
      for (int i = 0; i < 4; ++i) {
        double on = point(rng) / 100.0;
        double off = std::min(10.0, on + len(rng) / 100.0);
        if (off > on) iv.push_back({on, off});
      }
      return iv;
    };
    auto hyp = make();
    auto ref = make();
    VadScore s = score_vad(hyp, ref, 10.0);
    double speech = total_length(merge_overlapping(ref)) / 10.0;
    double expected = 100.0 - (s.false_alarm * (1.0 - speech) + s.miss * speech);
    CHECK(s.accuracy == doctest::Approx(expected).epsilon(1e-9));
  }
}
