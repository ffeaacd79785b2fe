#pragma once

#include <string>
#include <utility>
#include <vector>

#include "diar/intervals.hpp"
#include "diar/providers.hpp"
#include "diar/timeline.hpp"

namespace diar {

// Two-stage AHC parameters. Defaults are the grid-searched operating point:
// 1.28 s / 0.32 s windowing, segment threshold 0.54, stop threshold 0.62,
// 6 s long-cluster duration, speaker threshold 0.2. All thresholds are cosine
// similarities.
struct AhcConfig {
  double window = 1.28;
  double shift = 0.32;
  double segment_threshold = 0.54;
  double stop_threshold = 0.62;
  double long_cluster_min_duration = 6.0;
  double speaker_threshold = 0.2;
};

struct Cluster {
  std::vector<Embedding> members;
  double total_duration = 0.0;
  Embedding centroid;  // mean of member vectors
};

// Sliding windows over each speech region: starts at onset, onset + shift, ...
// while start + window fits; a final window ending exactly at the region
// offset is added when the last regular window falls short. Regions shorter
// than the window yield one segment covering the whole region.
std::vector<Interval> uniform_segments(const std::vector<Interval>& speech, double window,
                                       double shift);

// Greedy left-to-right pass merging a temporally adjacent next segment into
// the current group when cosine(group centroid, next embedding) >= threshold.
// Merged embeddings are member centroids.
std::pair<std::vector<Interval>, std::vector<Embedding>> merge_consecutive(
    const std::vector<Interval>& segments, const std::vector<Embedding>& embeddings,
    double segment_threshold);

// Average-linkage agglomeration on cosine similarity: repeatedly merge the
// highest-linkage pair while the linkage stays >= stop_threshold. Ties break
// to the smallest (i, j) position pair in the active cluster list.
std::vector<Cluster> plain_ahc(const std::vector<Embedding>& embeddings, double stop_threshold);

// Clusters at or above long_min_duration are long. Short clusters, visited in
// descending duration order, merge into the long cluster whose frozen initial
// centroid is most similar, unless that similarity is below speaker_threshold,
// in which case the short cluster is promoted to a standalone speaker.
std::vector<Cluster> assign_short_clusters(const std::vector<Cluster>& clusters,
                                           double long_min_duration, double speaker_threshold);

// Full pipeline: segment -> embed -> merge -> AHC -> short-cluster
// assignment. Output speakers are labeled spk0, spk1, ... by earliest
// member onset.
Timeline ahc_diarize(const std::string& recording_id, const std::vector<Interval>& speech,
                     const EmbeddingProvider& provider, const AhcConfig& config = {});

}  // namespace diar
