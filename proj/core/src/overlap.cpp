#include "diar/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "diar/errors.hpp"
#include "diar/vad.hpp"

namespace diar {

std::vector<Interval> detect_overlap_regions(const PosteriorTrack& track, double threshold) {
  validate_track(track);
  if (track.channels() != 1)
    throw ValidationError("detect_overlap_regions: track must be single-channel");
  return posterior_runs(track, 0, threshold);
}

std::optional<OverlapRegion> assign_two_closest_speakers(const Interval& region,
                                                         const Timeline& diarization) {
  std::vector<std::string> speakers = diarization.speakers();
  if (speakers.size() < 2) return std::nullopt;

  struct Candidate {
    std::string label;
    double proximity;
    double duration;
  };
  std::vector<Candidate> candidates;
  for (const std::string& spk : speakers) {
    double proximity = std::numeric_limits<double>::infinity();
    for (const Interval& iv : diarization.speaker_intervals(spk)) {
      double gap = std::max({0.0, iv.onset - region.offset, region.onset - iv.offset});
      proximity = std::min(proximity, gap);
      if (proximity == 0.0) break;
    }
    candidates.push_back({spk, proximity, diarization.speaker_duration(spk)});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.proximity != b.proximity) return a.proximity < b.proximity;
    if (a.duration != b.duration) return a.duration > b.duration;
    return a.label < b.label;
  });

  OverlapRegion out;
  out.onset = region.onset;
  out.offset = region.offset;
  out.speaker_a = candidates[0].label;
  out.speaker_b = candidates[1].label;
  return out;
}

Timeline apply_overlap_regions(const Timeline& diarization, std::vector<OverlapRegion> regions) {
  for (const OverlapRegion& r : regions) {
    if (!(r.offset > r.onset)) throw ValidationError("overlap region must have positive length");
    if (r.speaker_a == r.speaker_b)
      throw ValidationError("overlap region speakers must be distinct");
  }

  // Merge overlapping or abutting regions that share a speaker pair.
  std::sort(regions.begin(), regions.end(), [](const OverlapRegion& a, const OverlapRegion& b) {
    return a.onset < b.onset;
  });
  std::vector<OverlapRegion> merged;
  for (OverlapRegion r : regions) {
    if (std::min(r.speaker_a, r.speaker_b) != r.speaker_a) std::swap(r.speaker_a, r.speaker_b);
    if (!merged.empty() && merged.back().speaker_a == r.speaker_a &&
        merged.back().speaker_b == r.speaker_b && r.onset <= merged.back().offset + 1e-9) {
      merged.back().offset = std::max(merged.back().offset, r.offset);
    } else {
      merged.push_back(r);
    }
  }

  // Per-speaker interval edits, then rebuild.
  std::map<std::string, std::vector<Interval>> activity;
  for (const std::string& spk : diarization.speakers())
    activity[spk] = diarization.speaker_intervals(spk);

  for (const OverlapRegion& r : merged) {
    Interval span{r.onset, r.offset};
    for (auto& [spk, intervals] : activity) {
      if (spk == r.speaker_a || spk == r.speaker_b) continue;
      intervals = subtract_intervals(intervals, {span});
    }
    for (const std::string& spk : {r.speaker_a, r.speaker_b}) {
      auto& intervals = activity[spk];
      intervals.push_back(span);
      intervals = merge_overlapping(std::move(intervals));
    }
  }

  Timeline out(diarization.recording_id());
  for (const auto& [spk, intervals] : activity)
    for (const Interval& iv : intervals)
      if (iv.length() > 1e-9) out.insert(Turn{spk, iv.onset, iv.length()});
  return out;
}

PosteriorTrack FilePairScorer::score_pair(const PairScoreRequest& request) const {
  // Either member order names the file; both-active detection is symmetric.
  std::string path = directory_ + "/" + request.recording_id + "." + request.speaker_a + "-" +
                     request.speaker_b + ".pst";
  std::string alt = directory_ + "/" + request.recording_id + "." + request.speaker_b + "-" +
                    request.speaker_a + ".pst";
  PosteriorTrack full;
  try {
    full = load_posterior_file(path);
  } catch (const IoError&) {
    full = load_posterior_file(alt);
    path = alt;
  }
  if (full.channels() != 2)
    throw ProviderError(path + ": pair posterior must have 2 channels, got " +
                        std::to_string(full.channels()));

  // Slice the chunk out of the full-recording track.
  auto [first, last] = frame_index_range(request.chunk.onset, request.chunk.offset,
                                         full.frame_rate);
  PosteriorTrack out;
  out.frame_rate = full.frame_rate;
  out.channel_labels = full.channel_labels;
  std::size_t begin = std::min<std::size_t>(first, full.frames);
  std::size_t end = std::min<std::size_t>(last, full.frames);
  out.frames = end - begin;
  out.values.assign(full.values.begin() + static_cast<std::ptrdiff_t>(begin * 2),
                    full.values.begin() + static_cast<std::ptrdiff_t>(end * 2));
  return out;
}

Timeline pairwise_tsvad_overlap(const Timeline& diarization, const PairScorer& scorer,
                                std::size_t top_k, double threshold, double chunk_length,
                                std::size_t* failed_pairs) {
  if (failed_pairs) *failed_pairs = 0;
  if (!(chunk_length > 0.0)) throw ValidationError("chunk_length must be positive");
  std::vector<std::string> speakers = diarization.speakers();
  if (speakers.size() < 2) return diarization;

  // Longest-speech speakers first; ties to the smaller label.
  std::sort(speakers.begin(), speakers.end(), [&](const std::string& a, const std::string& b) {
    double da = diarization.speaker_duration(a), db = diarization.speaker_duration(b);
    if (da != db) return da > db;
    return a < b;
  });
  if (speakers.size() > top_k) speakers.resize(top_k);

  double extent = diarization.extent();
  std::vector<Interval> chunks;
  for (double start = 0.0; start < extent; start += chunk_length)
    chunks.push_back({start, std::min(start + chunk_length, extent)});

  std::map<std::string, std::vector<Interval>> additions;
  for (std::size_t i = 0; i < speakers.size(); ++i) {
    for (std::size_t j = i + 1; j < speakers.size(); ++j) {
      try {
        std::vector<Interval> pair_overlap;
        for (const Interval& chunk : chunks) {
          PairScoreRequest req;
          req.recording_id = diarization.recording_id();
          req.speaker_a = speakers[i];
          req.speaker_b = speakers[j];
          req.chunk = chunk;
          PosteriorTrack track = scorer.score_pair(req);
          if (track.channels() != 2)
            throw ProviderError("pair scorer returned " + std::to_string(track.channels()) +
                                " channels");
          std::vector<unsigned char> both(track.frames);
          for (std::size_t f = 0; f < track.frames; ++f)
            both[f] = (track.at(f, 0) >= threshold && track.at(f, 1) >= threshold) ? 1 : 0;
          for (Interval iv : frames_to_intervals(both, track.frame_rate)) {
            iv.onset += chunk.onset;
            iv.offset = std::min(iv.offset + chunk.onset, chunk.offset);
            if (iv.length() > 1e-9) pair_overlap.push_back(iv);
          }
        }
        for (const Interval& iv : pair_overlap) {
          additions[speakers[i]].push_back(iv);
          additions[speakers[j]].push_back(iv);
        }
      } catch (const Error&) {
        if (failed_pairs) ++*failed_pairs;  // pair skipped, others proceed
      }
    }
  }

  Timeline out = diarization;
  for (const auto& [spk, intervals] : additions)
    for (const Interval& iv : merge_overlapping(intervals))
      out.insert(Turn{spk, iv.onset, iv.length()});
  return out;
}

}  // namespace diar
