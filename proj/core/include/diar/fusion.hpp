#pragma once

#include <cstddef>
#include <vector>

#include "diar/timeline.hpp"

namespace diar {

// Hypothesis weighting: explicit per-system weights or reciprocal-rank
// weights 1 / rank^exponent (rank 1 = best = first hypothesis).
struct FusionWeights {
  enum class Mode { kCustom, kRankBased };
  Mode mode = Mode::kRankBased;
  std::vector<double> custom_weights;  // one per hypothesis, custom mode
  double rank_exponent = 1.0;

  static FusionWeights custom(std::vector<double> weights);
  static FusionWeights rank_based(double exponent = 1.0);
};

// Aligns speaker labels across hypotheses: the longest-speech hypothesis
// anchors a running reference; each following hypothesis is relabeled by an
// exact maximum-overlap assignment against it, unmatched speakers keep fresh
// labels, and the relabeled turns join the reference. Output order matches
// the input order.
std::vector<Timeline> map_labels(const std::vector<Timeline>& hypotheses);

// Normalized reciprocal-rank weights for k ranked hypotheses.
std::vector<double> compute_rank_weights(std::size_t k, double exponent = 1.0);

// Overlap-aware weighted voting on a 10 ms grid: the fused speaker count per
// frame is the weighted median of the hypotheses' counts (half-up, capped at
// the observed maximum), filled with the highest-vote speakers.
Timeline fuse(const std::vector<Timeline>& hypotheses, const FusionWeights& weights);

}  // namespace diar
