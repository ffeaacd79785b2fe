#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diar/intervals.hpp"
#include "diar/providers.hpp"
#include "diar/timeline.hpp"

namespace diar {

// Square pairwise-similarity matrix.
struct AffinityMatrix {
  std::size_t n = 0;
  std::vector<double> values;  // n x n, row-major
  bool symmetric = false;

  double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * n + j]; }
};

// Spectral-clustering parameters: 1.28 s / 0.64 s windowing and row blocks
// of 64 columns.
struct ScConfig {
  double window = 1.28;
  double shift = 0.64;
  std::size_t block_size = 64;
  std::size_t max_speakers = 20;
};

// Scores one affinity row: the anchor paired with each candidate in turn.
// Values must lie in [0, 1]. Implementations see at most block_size
// candidates per call.
class PairwiseScorer {
 public:
  virtual ~PairwiseScorer() = default;
  virtual std::vector<double> score_row(const Embedding& anchor,
                                        std::span<const Embedding> candidates) const = 0;
};

// Calibrated cosine stub for tests and file-free runs: negative similarities
// clamp to zero, so unrelated speakers land near 0 and matches near 1.
class CosineStubScorer : public PairwiseScorer {
 public:
  std::vector<double> score_row(const Embedding& anchor,
                                std::span<const Embedding> candidates) const override;
};

// Row i = scorer over pairs (x_i, x_1..n), built in contiguous blocks of at
// most block_size columns, then symmetrized as (S + S^T) / 2.
AffinityMatrix build_affinity(const std::vector<Embedding>& embeddings,
                              const PairwiseScorer& scorer, std::size_t block_size = 64);

// Eigengap heuristic on the symmetrically normalized affinity
// D^-1/2 S D^-1/2: k = argmax over 1 <= j < max_speakers of lambda_j -
// lambda_j+1 (descending eigenvalues, equal gaps resolve to the larger j).
std::size_t estimate_speaker_count(const AffinityMatrix& affinity, std::size_t max_speakers);

// Segment -> embed -> affinity -> (estimate k unless given) -> spectral
// embedding of the top-k eigenvectors, rows unit-normalized -> deterministic
// k-means. When every affinity entry is >= 0.95 and k is not pinned, the
// recording is treated as single-speaker.
Timeline spectral_diarize(const std::string& recording_id, const std::vector<Interval>& speech,
                          const EmbeddingProvider& provider, const PairwiseScorer& scorer,
                          const ScConfig& config = {},
                          std::optional<std::size_t> num_speakers = std::nullopt);

// Deterministic k-means over row vectors: farthest-point initialization
// seeded from row 0, at most 100 Lloyd iterations. Exposed for reuse by the
// clustering stages; rows is n x dim row-major.
std::vector<std::size_t> kmeans_rows(const std::vector<double>& rows, std::size_t n,
                                     std::size_t dim, std::size_t k);

// Affinity file: "AFF1 <n>" header then n rows of n decimals.
AffinityMatrix load_affinity_file(const std::string& path);
void write_affinity_file(const std::string& path, const AffinityMatrix& affinity);

// Clusters segment labels into a timeline, labeling clusters spk0, spk1, ...
// by earliest segment onset.
Timeline labels_to_timeline(const std::string& recording_id,
                            const std::vector<Interval>& segments,
                            const std::vector<std::size_t>& labels);

}  // namespace diar
