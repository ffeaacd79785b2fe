#pragma once

#include <vector>

#include "diar/intervals.hpp"
#include "diar/providers.hpp"

namespace diar {

struct VadDecision {
  std::vector<Interval> speech_intervals;  // disjoint, sorted
  double threshold_used = 0.0;
  std::vector<int> source_resolutions;  // S per fused input, coarsest-relative
};

// Stretches a track to a higher frame rate by repeating each frame; posterior
// models pool statistics every S frames, so values are piecewise constant.
// target_fps must be an integer multiple of the track's rate.
PosteriorTrack resample_track(const PosteriorTrack& track, double target_fps);

// Frame-wise mean of single-channel tracks at the common (maximum) frame
// rate. A trailing length mismatch of at most one coarsest frame is truncated
// to the shortest track; anything larger is an error.
PosteriorTrack fuse_tracks(const std::vector<PosteriorTrack>& tracks);

// Frames with value >= threshold are speech; maximal runs become intervals.
// min_speech_duration, when positive, drops shorter speech runs (off by
// default: no smoothing beyond run extraction).
VadDecision decide_speech(const PosteriorTrack& track, double threshold = 0.6,
                          double min_speech_duration = 0.0);

// Maximal runs of frames with channel value >= threshold.
std::vector<Interval> posterior_runs(const PosteriorTrack& track, std::size_t channel,
                                     double threshold);

}  // namespace diar
