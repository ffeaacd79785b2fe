#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "diar/intervals.hpp"

namespace diar {

// One speaker-labeled interval. The unit every stage produces and consumes.
struct Turn {
  std::string speaker;
  double onset = 0.0;     // seconds, >= 0
  double duration = 0.0;  // seconds, > 0

  double offset() const { return onset + duration; }
  bool operator==(const Turn&) const = default;
};

// Ordered collection of turns for one recording.
//
// Turns stay sorted by (onset, speaker). Distinct speakers may overlap;
// same-speaker turns that overlap or abut are merged on insertion, so a
// speaker's turns are always separated by positive gaps.
class Timeline {
 public:
  Timeline() = default;
  explicit Timeline(std::string recording_id) : recording_id_(std::move(recording_id)) {}

  const std::string& recording_id() const { return recording_id_; }
  const std::vector<Turn>& turns() const { return turns_; }
  bool empty() const { return turns_.empty(); }

  // Validates the turn and merges it with same-speaker neighbours.
  void insert(Turn turn);

  // Largest turn offset, 0 for an empty timeline.
  double extent() const;

  // Distinct speaker labels, sorted.
  std::vector<std::string> speakers() const;

  // Disjoint sorted activity intervals of one speaker.
  std::vector<Interval> speaker_intervals(const std::string& speaker) const;

  // Total active time of one speaker (same-speaker overlaps already merged).
  double speaker_duration(const std::string& speaker) const;

  double total_speech() const;

  bool operator==(const Timeline&) const = default;

 private:
  std::string recording_id_;
  std::vector<Turn> turns_;
};

// Binary speaker-activity matrix at a fixed frame rate.
struct FrameLabelMatrix {
  double frame_rate = kDefaultFrameRate;
  std::size_t frames = 0;
  std::vector<std::string> speaker_order;
  std::vector<std::uint8_t> values;  // frames x speakers, row-major

  std::size_t num_speakers() const { return speaker_order.size(); }
  std::uint8_t at(std::size_t frame, std::size_t speaker) const {
    return values[frame * speaker_order.size() + speaker];
  }
  std::uint8_t& at(std::size_t frame, std::size_t speaker) {
    return values[frame * speaker_order.size() + speaker];
  }
};

// RTTM text -> timelines keyed by recording id. Throws ParseError with the
// offending line number, ValidationError for non-positive durations.
std::map<std::string, Timeline> parse_rttm(const std::string& text);

// Deterministic RTTM: recordings in lexicographic order, turns by
// (onset, speaker), times at fixed 2-decimal precision.
std::string serialize_rttm(const std::map<std::string, Timeline>& timelines);

std::map<std::string, Timeline> load_rttm_file(const std::string& path);
void write_rttm_file(const std::string& path, const std::map<std::string, Timeline>& timelines);

// Rasterizes a timeline with frame-center membership: entry (f, s) is 1 iff
// speaker s is active at time (f + 0.5) / frame_rate. Speaker order is
// lexicographic.
FrameLabelMatrix timeline_to_label_matrix(const Timeline& timeline, double frame_rate,
                                          std::size_t total_frames);

// Inverse of the rasterization: maximal per-column runs become turns.
Timeline label_matrix_to_timeline(const FrameLabelMatrix& matrix,
                                  const std::string& recording_id = "");

// Union of all turns, merged where overlapping or closer than one frame.
std::vector<Interval> speech_regions(const Timeline& timeline,
                                     double frame_rate = kDefaultFrameRate);

}  // namespace diar
