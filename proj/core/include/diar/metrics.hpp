#pragma once

#include <string>
#include <vector>

#include "diar/intervals.hpp"
#include "diar/timeline.hpp"

namespace diar {

// NIST-style diarization score. der = miss + false_alarm + confusion.
struct DiarizationScore {
  double der = 0.0;
  double jer = 0.0;
  double miss = 0.0;
  double false_alarm = 0.0;
  double confusion = 0.0;
  double total_reference_speech = 0.0;  // scored reference speaker-seconds
};

struct VadScore {
  double false_alarm = 0.0;  // % of reference non-speech labeled speech
  double miss = 0.0;         // % of reference speech labeled non-speech
  double accuracy = 0.0;     // % of total duration labeled correctly
};

// Frame-quantized (10 ms) DER with an exact maximum-overlap speaker mapping.
// Frames within +/- collar of any reference turn boundary are not scored;
// when score_overlap is false, frames with more than one reference speaker
// are excluded as well. Throws ValidationError for mismatched recordings or
// an empty reference.
DiarizationScore score_der(const Timeline& hypothesis, const Timeline& reference,
                           double collar = 0.25, bool score_overlap = true);

// Jaccard error rate: per-reference-speaker 1 - |intersection| / |union|
// against the mapped hypothesis speaker, averaged over reference speakers.
// Unmapped reference speakers score 100. Overlap regions are always scored.
double score_jer(const Timeline& hypothesis, const Timeline& reference, double collar = 0.25);

// Interval-exact VAD scoring over [0, total_duration].
VadScore score_vad(const std::vector<Interval>& hypothesis_speech,
                   const std::vector<Interval>& reference_speech, double total_duration);

}  // namespace diar
