#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace diar {

// Canonical frame rate: 10 ms frames. All frame-rate parameters default to it.
inline constexpr double kDefaultFrameRate = 100.0;

// Half-open time span [onset, offset) in seconds.
struct Interval {
  double onset = 0.0;
  double offset = 0.0;

  double length() const { return offset - onset; }
  bool operator==(const Interval&) const = default;
};

// Sorts by onset and merges intervals that overlap or abut.
std::vector<Interval> merge_overlapping(std::vector<Interval> intervals);

// Like merge_overlapping, but also bridges gaps strictly smaller than max_gap.
std::vector<Interval> merge_with_gap(std::vector<Interval> intervals, double max_gap);

// Intersection of two interval lists (each assumed disjoint and sorted).
std::vector<Interval> intersect_intervals(const std::vector<Interval>& a,
                                          const std::vector<Interval>& b);

// Set difference a \ b (each assumed disjoint and sorted).
std::vector<Interval> subtract_intervals(const std::vector<Interval>& a,
                                         const std::vector<Interval>& b);

double total_length(const std::vector<Interval>& intervals);

// Frames whose centers (f + 0.5) / fps fall inside [onset, offset), as the
// half-open index range [first, last). Frame-center semantics keep boundary
// frames unambiguous.
std::pair<std::size_t, std::size_t> frame_index_range(double onset, double offset,
                                                      double frame_rate);

// Maximal runs of set frames converted back to time intervals.
std::vector<Interval> frames_to_intervals(const std::vector<unsigned char>& active,
                                          double frame_rate);

}  // namespace diar
