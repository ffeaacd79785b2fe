#include "diar/vad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "diar/errors.hpp"

namespace diar {

PosteriorTrack resample_track(const PosteriorTrack& track, double target_fps) {
  validate_track(track);
  if (target_fps < track.frame_rate - 1e-9)
    throw ValidationError("resample target fps below track fps");
  double ratio = target_fps / track.frame_rate;
  auto factor = static_cast<std::size_t>(std::llround(ratio));
  if (factor < 1 || std::abs(ratio - static_cast<double>(factor)) > 1e-9)
    throw ValidationError("resample ratio must be an integer, got " + std::to_string(ratio));
  if (factor == 1) return track;

  PosteriorTrack out;
  out.frame_rate = target_fps;
  out.frames = track.frames * factor;
  out.channel_labels = track.channel_labels;
  out.values.resize(out.frames * out.channels());
  for (std::size_t f = 0; f < track.frames; ++f)
    for (std::size_t k = 0; k < factor; ++k)
      for (std::size_t c = 0; c < track.channels(); ++c)
        out.at(f * factor + k, c) = track.at(f, c);
  return out;
}

PosteriorTrack fuse_tracks(const std::vector<PosteriorTrack>& tracks) {
  if (tracks.empty()) throw ValidationError("fuse_tracks: empty track list");
  double max_fps = 0.0, min_fps = std::numeric_limits<double>::infinity();
  for (const PosteriorTrack& t : tracks) {
    validate_track(t);
    if (t.channels() != 1) throw ValidationError("fuse_tracks: tracks must be single-channel");
    max_fps = std::max(max_fps, t.frame_rate);
    min_fps = std::min(min_fps, t.frame_rate);
  }

  std::vector<PosteriorTrack> resampled;
  resampled.reserve(tracks.size());
  std::size_t shortest = std::numeric_limits<std::size_t>::max();
  std::size_t longest = 0;
  for (const PosteriorTrack& t : tracks) {
    resampled.push_back(resample_track(t, max_fps));
    shortest = std::min(shortest, resampled.back().frames);
    longest = std::max(longest, resampled.back().frames);
  }
  auto coarsest_frame = static_cast<std::size_t>(std::llround(max_fps / min_fps));
  if (longest - shortest > coarsest_frame)
    throw ValidationError("fuse_tracks: length mismatch of " +
                          std::to_string(longest - shortest) +
                          " frames exceeds one coarsest frame (" +
                          std::to_string(coarsest_frame) + ")");

  PosteriorTrack out;
  out.frame_rate = max_fps;
  out.frames = shortest;
  out.channel_labels = tracks.front().channel_labels;
  out.values.assign(shortest, 0.0);
  for (const PosteriorTrack& t : resampled)
    for (std::size_t f = 0; f < shortest; ++f) out.values[f] += t.at(f, 0);
  for (double& v : out.values) v /= static_cast<double>(tracks.size());
  return out;
}

std::vector<Interval> posterior_runs(const PosteriorTrack& track, std::size_t channel,
                                     double threshold) {
  if (channel >= track.channels()) throw ValidationError("posterior_runs: channel out of range");
  std::vector<unsigned char> active(track.frames);
  for (std::size_t f = 0; f < track.frames; ++f)
    active[f] = track.at(f, channel) >= threshold ? 1 : 0;
  return frames_to_intervals(active, track.frame_rate);
}

VadDecision decide_speech(const PosteriorTrack& track, double threshold,
                          double min_speech_duration) {
  validate_track(track);
  if (track.channels() != 1) throw ValidationError("decide_speech: track must be single-channel");
  VadDecision decision;
  decision.threshold_used = threshold;
  for (const Interval& run : posterior_runs(track, 0, threshold))
    if (run.length() >= min_speech_duration - 1e-12) decision.speech_intervals.push_back(run);
  return decision;
}

}  // namespace diar
