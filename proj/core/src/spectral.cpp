#include "diar/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>

#include "diar/ahc.hpp"
#include "diar/errors.hpp"

namespace diar {

std::vector<double> CosineStubScorer::score_row(const Embedding& anchor,
                                                std::span<const Embedding> candidates) const {
  std::vector<double> out;
  out.reserve(candidates.size());
  for (const Embedding& c : candidates)
    out.push_back(std::clamp(cosine_similarity(anchor, c), 0.0, 1.0));
  return out;
}

AffinityMatrix build_affinity(const std::vector<Embedding>& embeddings,
                              const PairwiseScorer& scorer, std::size_t block_size) {
  if (embeddings.empty()) throw ValidationError("build_affinity: no embeddings");
  if (block_size < 2) throw ValidationError("build_affinity: block_size must be >= 2");
  const std::size_t n = embeddings.size();

  AffinityMatrix raw;
  raw.n = n;
  raw.values.resize(n * n);
  std::span<const Embedding> all(embeddings);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t col = 0;
    while (col < n) {
      std::size_t len = std::min(block_size, n - col);
      std::vector<double> block = scorer.score_row(embeddings[i], all.subspan(col, len));
      if (block.size() != len)
        throw ValidationError("scorer returned " + std::to_string(block.size()) +
                              " values for a block of " + std::to_string(len));
      for (std::size_t j = 0; j < len; ++j) {
        if (!(block[j] >= 0.0 && block[j] <= 1.0))
          throw ValidationError("scorer value out of [0,1] at (" + std::to_string(i) + ", " +
                                std::to_string(col + j) + ")");
        raw.at(i, col + j) = block[j];
      }
      col += len;
    }
  }

  AffinityMatrix out;
  out.n = n;
  out.values.resize(n * n);
  out.symmetric = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.at(i, j) = 0.5 * (raw.at(i, j) + raw.at(j, i));
  return out;
}

namespace {

void check_symmetric(const AffinityMatrix& a) {
  if (a.n == 0) throw ValidationError("empty affinity matrix");
  if (a.values.size() != a.n * a.n) throw ValidationError("affinity matrix size mismatch");
  if (!a.symmetric) throw ValidationError("affinity matrix not symmetrized");
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = i + 1; j < a.n; ++j)
      if (std::abs(a.at(i, j) - a.at(j, i)) > 1e-9)
        throw ValidationError("affinity matrix marked symmetric but is not");
}

// D^-1/2 S D^-1/2 with degree floor to survive all-zero rows.
Eigen::MatrixXd normalized_affinity(const AffinityMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.n);
  Eigen::MatrixXd S(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      S(i, j) = a.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::VectorXd d = S.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i) d(i) = 1.0 / std::sqrt(std::max(d(i), 1e-12));
  return d.asDiagonal() * S * d.asDiagonal();
}

}  // namespace

std::size_t estimate_speaker_count(const AffinityMatrix& affinity, std::size_t max_speakers) {
  check_symmetric(affinity);
  if (max_speakers < 1) throw ValidationError("max_speakers must be >= 1");
  const std::size_t n = affinity.n;
  if (n == 1 || max_speakers == 1) return 1;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(normalized_affinity(affinity));
  Eigen::VectorXd eigenvalues = solver.eigenvalues();  // ascending
  std::vector<double> descending(eigenvalues.data(), eigenvalues.data() + eigenvalues.size());
  std::reverse(descending.begin(), descending.end());

  std::size_t limit = std::min(max_speakers, n);
  std::size_t best_k = 1;
  double best_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < limit; ++j) {
    double gap = descending[j - 1] - descending[j];
    if (gap >= best_gap) {  // equal gaps resolve to the larger j
      best_gap = gap;
      best_k = j;
    }
  }
  return best_k;
}

std::vector<std::size_t> kmeans_rows(const std::vector<double>& rows, std::size_t n,
                                     std::size_t dim, std::size_t k) {
  if (n == 0 || dim == 0) throw ValidationError("kmeans: empty input");
  if (rows.size() != n * dim) throw ValidationError("kmeans: row buffer size mismatch");
  if (k == 0 || k > n) throw ValidationError("kmeans: k out of range");

  auto dist2 = [&](const double* a, const double* b) {
    double s = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      double diff = a[d] - b[d];
      s += diff * diff;
    }
    return s;
  };

  // Farthest-point initialization anchored at row 0.
  std::vector<std::size_t> center_rows{0};
  std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
  while (center_rows.size() < k) {
    const double* last = &rows[center_rows.back() * dim];
    std::size_t farthest = 0;
    double farthest_dist = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      min_dist[i] = std::min(min_dist[i], dist2(&rows[i * dim], last));
      if (min_dist[i] > farthest_dist) {  // strict: ties keep the first row
        farthest_dist = min_dist[i];
        farthest = i;
      }
    }
    center_rows.push_back(farthest);
  }

  std::vector<double> centers(k * dim);
  for (std::size_t c = 0; c < k; ++c)
    std::copy_n(&rows[center_rows[c] * dim], dim, &centers[c * dim]);

  std::vector<std::size_t> labels(n, 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        double d = dist2(&rows[i * dim], &centers[c * dim]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (labels[i] != best) {
        labels[i] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    std::vector<double> sums(k * dim, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[labels[i]];
      for (std::size_t d = 0; d < dim; ++d) sums[labels[i] * dim + d] += rows[i * dim + d];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its previous center
      for (std::size_t d = 0; d < dim; ++d)
        centers[c * dim + d] = sums[c * dim + d] / static_cast<double>(counts[c]);
    }
  }
  return labels;
}

Timeline labels_to_timeline(const std::string& recording_id,
                            const std::vector<Interval>& segments,
                            const std::vector<std::size_t>& labels) {
  if (segments.size() != labels.size())
    throw ValidationError("labels_to_timeline: segments and labels misaligned");

  // Order cluster ids by earliest segment onset.
  std::map<std::size_t, double> first_onset;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = first_onset.try_emplace(labels[i], segments[i].onset);
    if (!inserted) it->second = std::min(it->second, segments[i].onset);
  }
  std::vector<std::pair<double, std::size_t>> order;
  for (const auto& [cluster, onset] : first_onset) order.emplace_back(onset, cluster);
  std::sort(order.begin(), order.end());
  std::map<std::size_t, std::string> name;
  for (std::size_t rank = 0; rank < order.size(); ++rank)
    name[order[rank].second] = "spk" + std::to_string(rank);

  Timeline out(recording_id);
  for (std::size_t i = 0; i < segments.size(); ++i)
    out.insert(Turn{name[labels[i]], segments[i].onset, segments[i].length()});
  return out;
}

Timeline spectral_diarize(const std::string& recording_id, const std::vector<Interval>& speech,
                          const EmbeddingProvider& provider, const PairwiseScorer& scorer,
                          const ScConfig& config, std::optional<std::size_t> num_speakers) {
  if (speech.empty()) throw ValidationError("spectral_diarize: empty speech region list");

  std::vector<Interval> segments = uniform_segments(speech, config.window, config.shift);
  std::vector<Embedding> embeddings = provider.embed(recording_id, segments);
  AffinityMatrix affinity = build_affinity(embeddings, scorer, config.block_size);
  const std::size_t n = affinity.n;

  std::size_t k;
  if (num_speakers) {
    k = *num_speakers;
    if (k == 0 || k > n) throw ValidationError("requested speaker count out of range");
  } else {
    double min_affinity = *std::min_element(affinity.values.begin(), affinity.values.end());
    k = min_affinity >= 0.95 ? 1 : estimate_speaker_count(affinity, config.max_speakers);
    k = std::min(k, n);
  }

  std::vector<std::size_t> labels;
  if (k == 1) {
    labels.assign(n, 0);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(normalized_affinity(affinity));
    const auto ni = static_cast<Eigen::Index>(n);
    const auto ki = static_cast<Eigen::Index>(k);
    // Top-k eigenvectors (solver returns ascending), rows unit-normalized.
    std::vector<double> rows(n * k);
    Eigen::MatrixXd top = solver.eigenvectors().rightCols(ki).rowwise().reverse();
    for (Eigen::Index i = 0; i < ni; ++i) {
      double row_norm = top.row(i).norm();
      if (row_norm < 1e-12) row_norm = 1.0;
      for (Eigen::Index c = 0; c < ki; ++c)
        rows[static_cast<std::size_t>(i) * k + static_cast<std::size_t>(c)] =
            top(i, c) / row_norm;
    }
    labels = kmeans_rows(rows, n, k, k);
  }
  return labels_to_timeline(recording_id, segments, labels);
}

AffinityMatrix load_affinity_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open affinity file: " + path);
  std::string magic;
  std::size_t n = 0;
  if (!(in >> magic) || magic != "AFF1" || !(in >> n))
    throw ParseError(path + ": expected 'AFF1 <n>' header");
  AffinityMatrix a;
  a.n = n;
  a.values.resize(n * n);
  for (std::size_t i = 0; i < n * n; ++i)
    if (!(in >> a.values[i])) throw ParseError(path + ": truncated affinity payload");
  a.symmetric = true;
  for (std::size_t i = 0; i < n && a.symmetric; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(a.at(i, j) - a.at(j, i)) > 1e-9) {
        a.symmetric = false;
        break;
      }
  return a;
}

void write_affinity_file(const std::string& path, const AffinityMatrix& affinity) {
  if (affinity.values.size() != affinity.n * affinity.n)
    throw ValidationError("affinity matrix size mismatch");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write affinity file: " + path);
  out << "AFF1 " << affinity.n << "\n";
  char buf[64];
  for (std::size_t i = 0; i < affinity.n; ++i) {
    std::string line;
    for (std::size_t j = 0; j < affinity.n; ++j) {
      if (j) line += ' ';
      std::snprintf(buf, sizeof(buf), "%.17g", affinity.at(i, j));
      line += buf;
    }
    line += '\n';
    out << line;
  }
}

}  // namespace diar
