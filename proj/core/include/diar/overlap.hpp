#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diar/intervals.hpp"
#include "diar/providers.hpp"
#include "diar/timeline.hpp"

namespace diar {

// An overlap interval with its two assigned speakers.
struct OverlapRegion {
  double onset = 0.0;
  double offset = 0.0;
  std::string speaker_a;
  std::string speaker_b;
};

// One 2-speaker TS-VAD scoring request. The chunk is an original-time span of
// the recording; embeddings may be empty when no provider is configured.
struct PairScoreRequest {
  std::string recording_id;
  std::string speaker_a;
  std::string speaker_b;
  std::vector<Embedding> embeddings;  // 0 or 2 target embeddings
  Interval chunk;
};

// Returns a 2-channel track covering req.chunk (frame 0 at chunk onset).
// Channel 0 follows speaker_a, channel 1 speaker_b.
class PairScorer {
 public:
  virtual ~PairScorer() = default;
  virtual PosteriorTrack score_pair(const PairScoreRequest& request) const = 0;
};

// Serves pair tracks from posterior files laid out as
// <dir>/<recording>.<spkA>-<spkB>.pst, full-recording original time.
class FilePairScorer : public PairScorer {
 public:
  explicit FilePairScorer(std::string directory) : directory_(std::move(directory)) {}
  PosteriorTrack score_pair(const PairScoreRequest& request) const override;

 private:
  std::string directory_;
};

// Maximal runs of frames with posterior >= threshold.
std::vector<Interval> detect_overlap_regions(const PosteriorTrack& track,
                                             double threshold = 0.8);

// Picks the two speakers whose existing turns are temporally closest to the
// region (distance 0 when a turn intersects it). Ties prefer the larger total
// speaking duration, then the smaller label. Returns nullopt when fewer than
// two speakers exist; callers should warn and skip.
std::optional<OverlapRegion> assign_two_closest_speakers(const Interval& region,
                                                         const Timeline& diarization);

// Replaces the labeling inside each region with exactly the two assigned
// speakers: their activity covers the region, other speakers are cut out
// within it. The timeline is untouched outside the regions. Regions with the
// same speaker pair are merged first; remaining regions apply in onset order.
Timeline apply_overlap_regions(const Timeline& diarization,
                               std::vector<OverlapRegion> regions);

// 2-speaker TS-VAD overlap refinement: the top_k speakers with the longest
// speech form C(k, 2) pairs; frames where both pair channels reach the
// threshold become overlap, added for both pair members. Purely additive —
// existing speech is never removed. A failing pair is skipped (counted in
// *failed_pairs when given); the others proceed.
Timeline pairwise_tsvad_overlap(const Timeline& diarization, const PairScorer& scorer,
                                std::size_t top_k = 5, double threshold = 0.8,
                                double chunk_length = 16.0,
                                std::size_t* failed_pairs = nullptr);

}  // namespace diar
