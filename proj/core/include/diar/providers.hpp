#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "diar/intervals.hpp"
#include "diar/timeline.hpp"

namespace diar {

// Fixed-dimension speaker embedding with its source segment.
struct Embedding {
  std::vector<double> vector;
  Interval segment;
  std::string recording_id;

  std::size_t dimension() const { return vector.size(); }
  bool operator==(const Embedding&) const = default;
};

// Frame-rate-annotated probabilities, one column per channel. Single-channel
// for VAD and overlap posteriors, one channel per target for TS-VAD.
struct PosteriorTrack {
  double frame_rate = kDefaultFrameRate;
  std::size_t frames = 0;
  std::vector<std::string> channel_labels;
  std::vector<double> values;  // frames x channels, row-major

  std::size_t channels() const { return channel_labels.size(); }
  double at(std::size_t frame, std::size_t channel) const {
    return values[frame * channel_labels.size() + channel];
  }
  double& at(std::size_t frame, std::size_t channel) {
    return values[frame * channel_labels.size() + channel];
  }
  bool operator==(const PosteriorTrack&) const = default;
};

// Throws ValidationError when shapes disagree or a value leaves [0, 1].
void validate_track(const PosteriorTrack& track);

// cos(a, b); throws ValidationError for zero-norm vectors or dim mismatch.
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);
double cosine_similarity(const Embedding& a, const Embedding& b);

// Arithmetic mean vector; segment spans min onset to max offset.
Embedding centroid(const std::vector<Embedding>& embeddings);

// Source of segment embeddings. Implementations must be safe for concurrent
// reads across recordings.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dimension() const = 0;
  // One embedding per segment, order preserved, deterministic.
  virtual std::vector<Embedding> embed(const std::string& recording_id,
                                       const std::vector<Interval>& segments) const = 0;
};

// Test double for the speaker-embedding network: each speaker has a fixed
// unit-norm centroid, segments get centroid + Gaussian noise re-normalized.
struct SyntheticSpeakerModel {
  std::string speaker_id;
  std::vector<double> centroid;  // unit norm
  double noise_scale = 0.0;
  std::uint64_t seed = 0;
};

class SyntheticProvider : public EmbeddingProvider {
 public:
  // truth supplies per-recording ground-truth activity used to decide which
  // speaker dominates a segment.
  SyntheticProvider(std::map<std::string, Timeline> truth,
                    std::vector<SyntheticSpeakerModel> speakers);

  std::size_t dimension() const override { return dimension_; }
  std::vector<Embedding> embed(const std::string& recording_id,
                               const std::vector<Interval>& segments) const override;

  // Noise-free speaker centroid, for test oracles.
  const std::vector<double>& speaker_centroid(const std::string& speaker_id) const;

 private:
  std::map<std::string, Timeline> truth_;
  std::map<std::string, SyntheticSpeakerModel> speakers_;
  std::size_t dimension_ = 0;
};

// Serves embeddings recorded in an embedding file; segments are looked up by
// (onset, offset) within half a frame.
class FileEmbeddingProvider : public EmbeddingProvider {
 public:
  FileEmbeddingProvider(std::string recording_id, std::vector<Embedding> embeddings);
  static FileEmbeddingProvider from_file(const std::string& recording_id,
                                         const std::string& path);

  std::size_t dimension() const override { return dimension_; }
  std::vector<Embedding> embed(const std::string& recording_id,
                               const std::vector<Interval>& segments) const override;

 private:
  std::string recording_id_;
  std::vector<Embedding> embeddings_;
  std::size_t dimension_ = 0;
};

// Posterior file: "PST1 <frame_rate> <T> <C> <labels comma-separated>" header,
// then T lines of C decimals. Values outside [0, 1] are an error, not clamped.
PosteriorTrack load_posterior(std::istream& in, const std::string& origin = "<stream>");
PosteriorTrack load_posterior_file(const std::string& path);
void write_posterior(std::ostream& out, const PosteriorTrack& track);
void write_posterior_file(const std::string& path, const PosteriorTrack& track);

// Embedding file: "EMB1 <D> <count>" header, then one line per embedding:
// onset offset and D decimals.
std::vector<Embedding> load_embeddings(std::istream& in, const std::string& origin = "<stream>");
std::vector<Embedding> load_embedding_file(const std::string& path);
void write_embeddings(std::ostream& out, const std::vector<Embedding>& embeddings);
void write_embedding_file(const std::string& path, const std::vector<Embedding>& embeddings);

// Deterministic unit vector for synthetic speaker centroids.
std::vector<double> random_unit_vector(std::size_t dimension, std::uint64_t seed);

}  // namespace diar
