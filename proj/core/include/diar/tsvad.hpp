#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diar/intervals.hpp"
#include "diar/providers.hpp"
#include "diar/timeline.hpp"

namespace diar {

// TS-VAD inference parameters: 16 s chunks, N = 8 target slots, targets need
// 16 s of speech, decision threshold 0.8.
struct TsvadConfig {
  double chunk_length = 16.0;
  std::size_t max_targets = 8;
  double min_target_speech = 16.0;
  double decision_threshold = 0.8;
  double frame_rate = kDefaultFrameRate;
};

// Target slate for one recording: chosen targets in rank order, zero-vector
// padding up to max_targets, and the turns of speakers excluded from scoring
// (kept verbatim in the output).
struct TargetSet {
  std::vector<std::pair<std::string, Embedding>> targets;
  std::size_t padded_slots = 0;
  std::vector<Turn> retained_turns;

  std::vector<std::string> retained_labels() const;
};

// Piecewise-linear map between concatenated-speech time and original
// recording time. Pieces are contiguous in local time.
class TimeMap {
 public:
  void add_piece(double local_onset, double local_offset, double original_onset);

  // Maps a local interval to its (possibly split) original-time image.
  std::vector<Interval> to_original(const Interval& local) const;

  // Maps a single local time point; nullopt outside the mapped range.
  std::optional<double> to_original_point(double local) const;

  // Local time of the first piece; posterior frame 0 sits here.
  double local_onset() const;
  double local_extent() const;
  bool empty() const { return pieces_.empty(); }

 private:
  struct Piece {
    double local_onset;
    double local_offset;
    double original_onset;
  };
  std::vector<Piece> pieces_;
};

// One chunk of concatenated speech with its back-mapping to original time.
struct TsvadChunk {
  Interval local;  // within concatenated-speech coordinates
  TimeMap map;
};

// Produces an N-channel posterior for a chunk; channel c tracks target c,
// channels past the real targets belong to padded slots.
class TsvadScorer {
 public:
  virtual ~TsvadScorer() = default;
  virtual PosteriorTrack score_chunk(const std::string& recording_id, const TsvadChunk& chunk,
                                     const TargetSet& targets,
                                     const TsvadConfig& config) const = 0;
};

// Test/demo scorer that echoes a known timeline: target channels read 0.9
// where that speaker is active at the mapped original time, 0 elsewhere.
class EchoTsvadScorer : public TsvadScorer {
 public:
  explicit EchoTsvadScorer(Timeline source) : source_(std::move(source)) {}
  PosteriorTrack score_chunk(const std::string& recording_id, const TsvadChunk& chunk,
                             const TargetSet& targets,
                             const TsvadConfig& config) const override;

 private:
  Timeline source_;
};

// Serves chunk posteriors from one N-channel track covering the whole
// concatenated-speech axis of the recording.
class FileTsvadScorer : public TsvadScorer {
 public:
  explicit FileTsvadScorer(PosteriorTrack full_track);
  PosteriorTrack score_chunk(const std::string& recording_id, const TsvadChunk& chunk,
                             const TargetSet& targets,
                             const TsvadConfig& config) const override;

 private:
  PosteriorTrack full_;
};

// Ranks speakers by total speech descending; those with at least
// min_target_speech become targets, truncated to max_targets. Everyone else
// is retained verbatim. Target embeddings are provider centroids over the
// speaker's turns.
TargetSet select_targets(const Timeline& diarization, const EmbeddingProvider& provider,
                         const TsvadConfig& config = {});

// Splits concatenated speech (non-speech removed) into chunk_length spans;
// the final partial chunk is kept. Each chunk maps back to original time.
std::vector<TsvadChunk> chunk_recording(const std::vector<Interval>& speech,
                                        double chunk_length);

// Thresholds real-target channels into activity, maps it through the chunk's
// time map, and copies retained turns verbatim.
Timeline decode_decisions(const PosteriorTrack& posterior, const TargetSet& targets,
                          double threshold, const TimeMap& time_map,
                          const std::string& recording_id);

// select_targets -> chunk_recording -> score -> decode, concatenated.
// A failing chunk aborts the recording.
Timeline tsvad_refine(const Timeline& diarization, const EmbeddingProvider& provider,
                      const TsvadScorer& scorer, const TsvadConfig& config = {});

// ---- Data simulation ----

// Ordered source audio for one simulated speaker.
struct SpeakerSource {
  std::string speaker;
  std::vector<std::vector<std::int16_t>> segments;
  int sample_rate = 16000;
};

struct SimulationRecipe {
  FrameLabelMatrix labels;
  std::vector<SpeakerSource> sources;
  int output_sample_rate = 16000;
};

struct SimulationResult {
  std::vector<std::int16_t> samples;
  FrameLabelMatrix labels;  // aligned to the mixture
};

// Fills each speaker's active runs left-to-right from their source stream
// (hard cuts at run boundaries), sums the tracks sample-wise with int16
// saturation. Inactive speaker columns and all-zero frames are dropped first,
// so the returned labels align with the mixture.
SimulationResult simulate_mixture(const SimulationRecipe& recipe);

// Per-speaker fill used by simulate_mixture; column indexes recipe labels.
std::vector<std::int16_t> fill_speaker_track(const FrameLabelMatrix& labels, std::size_t column,
                                             const SpeakerSource& source,
                                             std::size_t samples_per_frame);

}  // namespace diar
