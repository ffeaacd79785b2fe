#include "diar/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "diar/assignment.hpp"
#include "diar/errors.hpp"

namespace diar {

namespace {

struct FrameView {
  std::size_t frames = 0;
  std::vector<std::string> ref_speakers;
  std::vector<std::string> hyp_speakers;
  // speaker x frame activity bitmaps
  std::vector<std::vector<unsigned char>> ref_active;
  std::vector<std::vector<unsigned char>> hyp_active;
  std::vector<unsigned char> scored;          // collar mask
  std::vector<unsigned char> scored_der;      // collar + overlap exclusion
  std::vector<int> mapping_der;               // ref speaker -> hyp speaker or -1
  std::vector<int> mapping_jer;
};

std::vector<unsigned char> rasterize(const Timeline& t, const std::string& speaker,
                                     std::size_t frames, double fps) {
  std::vector<unsigned char> active(frames, 0);
  for (const Interval& iv : t.speaker_intervals(speaker)) {
    auto [first, last] = frame_index_range(iv.onset, iv.offset, fps);
    last = std::min<std::size_t>(last, frames);
    for (std::size_t f = first; f < last; ++f) active[f] = 1;
  }
  return active;
}

// Exact max-overlap mapping restricted to a frame mask.
std::vector<int> map_speakers(const FrameView& v, const std::vector<unsigned char>& mask) {
  const std::size_t nr = v.ref_speakers.size(), nh = v.hyp_speakers.size();
  if (nr == 0 || nh == 0) return std::vector<int>(nr, -1);
  std::vector<double> overlap(nr * nh, 0.0);
  for (std::size_t f = 0; f < v.frames; ++f) {
    if (!mask[f]) continue;
    for (std::size_t r = 0; r < nr; ++r) {
      if (!v.ref_active[r][f]) continue;
      for (std::size_t h = 0; h < nh; ++h)
        if (v.hyp_active[h][f]) overlap[r * nh + h] += 1.0;
    }
  }
  return max_weight_assignment(overlap, nr, nh);
}

FrameView build_frame_view(const Timeline& hypothesis, const Timeline& reference, double collar,
                           bool score_overlap) {
  if (!hypothesis.recording_id().empty() && !reference.recording_id().empty() &&
      hypothesis.recording_id() != reference.recording_id())
    throw ValidationError("scoring timelines from different recordings: '" +
                          hypothesis.recording_id() + "' vs '" + reference.recording_id() + "'");
  if (reference.empty()) throw ValidationError("reference timeline has no speech");
  if (collar < 0.0) throw ValidationError("collar must be non-negative");

  const double fps = kDefaultFrameRate;
  FrameView v;
  double end = std::max(hypothesis.extent(), reference.extent());
  v.frames = static_cast<std::size_t>(std::ceil(end * fps - 1e-9));
  v.ref_speakers = reference.speakers();
  v.hyp_speakers = hypothesis.speakers();
  for (const auto& s : v.ref_speakers)
    v.ref_active.push_back(rasterize(reference, s, v.frames, fps));
  for (const auto& s : v.hyp_speakers)
    v.hyp_active.push_back(rasterize(hypothesis, s, v.frames, fps));

  v.scored.assign(v.frames, 1);
  if (collar > 0.0) {
    for (const Turn& t : reference.turns()) {
      for (double b : {t.onset, t.offset()}) {
        auto [first, last] = frame_index_range(b - collar, b + collar, fps);
        last = std::min<std::size_t>(last, v.frames);
        for (std::size_t f = first; f < last; ++f) v.scored[f] = 0;
      }
    }
  }

  v.scored_der = v.scored;
  if (!score_overlap) {
    for (std::size_t f = 0; f < v.frames; ++f) {
      if (!v.scored_der[f]) continue;
      int nref = 0;
      for (const auto& col : v.ref_active) nref += col[f];
      if (nref > 1) v.scored_der[f] = 0;
    }
  }

  v.mapping_der = map_speakers(v, v.scored_der);
  v.mapping_jer = score_overlap ? v.mapping_der : map_speakers(v, v.scored);
  return v;
}

double jer_from_view(const FrameView& v) {
  if (v.ref_speakers.empty()) throw ValidationError("reference timeline has no speech");
  double total = 0.0;
  for (std::size_t r = 0; r < v.ref_speakers.size(); ++r) {
    int h = v.mapping_jer[r];
    if (h < 0) {
      total += 100.0;
      continue;
    }
    double inter = 0.0, uni = 0.0;
    for (std::size_t f = 0; f < v.frames; ++f) {
      if (!v.scored[f]) continue;
      bool rr = v.ref_active[r][f], hh = v.hyp_active[static_cast<std::size_t>(h)][f];
      inter += (rr && hh) ? 1.0 : 0.0;
      uni += (rr || hh) ? 1.0 : 0.0;
    }
    if (uni > 0.0) total += 100.0 * (1.0 - inter / uni);
  }
  return total / static_cast<double>(v.ref_speakers.size());
}

}  // namespace

DiarizationScore score_der(const Timeline& hypothesis, const Timeline& reference, double collar,
                           bool score_overlap) {
  FrameView v = build_frame_view(hypothesis, reference, collar, score_overlap);

  double ref_frames = 0.0, miss = 0.0, fa = 0.0, correct = 0.0, matched = 0.0;
  for (std::size_t f = 0; f < v.frames; ++f) {
    if (!v.scored_der[f]) continue;
    int nref = 0, nhyp = 0, ncorr = 0;
    for (std::size_t r = 0; r < v.ref_speakers.size(); ++r) {
      if (!v.ref_active[r][f]) continue;
      ++nref;
      int h = v.mapping_der[r];
      if (h >= 0 && v.hyp_active[static_cast<std::size_t>(h)][f]) ++ncorr;
    }
    for (const auto& col : v.hyp_active) nhyp += col[f];
    ref_frames += nref;
    miss += std::max(0, nref - nhyp);
    fa += std::max(0, nhyp - nref);
    matched += std::min(nref, nhyp);
    correct += ncorr;
  }
  if (ref_frames == 0.0)
    throw ValidationError("no scored reference speech (collar removed everything)");

  DiarizationScore score;
  score.miss = 100.0 * miss / ref_frames;
  score.false_alarm = 100.0 * fa / ref_frames;
  score.confusion = 100.0 * (matched - correct) / ref_frames;
  score.der = score.miss + score.false_alarm + score.confusion;
  score.total_reference_speech = ref_frames / kDefaultFrameRate;
  score.jer = jer_from_view(v);
  return score;
}

double score_jer(const Timeline& hypothesis, const Timeline& reference, double collar) {
  FrameView v = build_frame_view(hypothesis, reference, collar, /*score_overlap=*/true);
  return jer_from_view(v);
}

VadScore score_vad(const std::vector<Interval>& hypothesis_speech,
                   const std::vector<Interval>& reference_speech, double total_duration) {
  if (total_duration <= 0.0) throw ValidationError("total_duration must be positive");
  auto check_bounds = [&](const std::vector<Interval>& iv, const char* what) {
    for (const Interval& i : iv) {
      if (i.offset <= i.onset) throw ValidationError(std::string(what) + ": empty interval");
      if (i.onset < -1e-9 || i.offset > total_duration + 1e-9)
        throw ValidationError(std::string(what) + ": interval outside [0, total_duration]");
    }
  };
  check_bounds(hypothesis_speech, "hypothesis");
  check_bounds(reference_speech, "reference");

  auto hyp = merge_overlapping(hypothesis_speech);
  auto ref = merge_overlapping(reference_speech);
  double ref_speech = total_length(ref);
  double ref_nonspeech = total_duration - ref_speech;
  double agree = total_length(intersect_intervals(hyp, ref));
  double fa_duration = total_length(hyp) - agree;     // speech claimed over non-speech
  double miss_duration = ref_speech - agree;          // speech labeled non-speech

  VadScore score;
  score.false_alarm = ref_nonspeech > 0.0 ? 100.0 * fa_duration / ref_nonspeech : 0.0;
  score.miss = ref_speech > 0.0 ? 100.0 * miss_duration / ref_speech : 0.0;
  score.accuracy = 100.0 * (total_duration - fa_duration - miss_duration) / total_duration;
  return score;
}

}  // namespace diar
