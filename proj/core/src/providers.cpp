#include "diar/providers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "diar/errors.hpp"

namespace diar {

namespace {

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) { return mix64(h ^ mix64(v)); }

std::uint64_t hash_string(std::uint64_t h, const std::string& s) {
  for (unsigned char c : s) h = mix64(h ^ c);
  return h;
}

std::uint64_t double_bits(double d) {
  std::uint64_t u;
  static_assert(sizeof(u) == sizeof(d));
  std::memcpy(&u, &d, sizeof(u));
  return u;
}

void format_double(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

void validate_track(const PosteriorTrack& track) {
  if (track.channel_labels.empty()) throw ValidationError("posterior track needs >= 1 channel");
  if (track.frame_rate <= 0.0) throw ValidationError("posterior frame rate must be positive");
  if (track.values.size() != track.frames * track.channels())
    throw ValidationError("posterior value buffer does not match frames x channels");
  for (std::size_t f = 0; f < track.frames; ++f)
    for (std::size_t c = 0; c < track.channels(); ++c) {
      double v = track.at(f, c);
      if (!(v >= 0.0 && v <= 1.0))
        throw ValidationError("posterior value out of [0,1] at frame " + std::to_string(f) +
                              " channel " + std::to_string(c));
    }
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw ValidationError("cosine: dimension mismatch " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  double na = norm(a), nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw ValidationError("cosine: zero-norm vector");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return dot / (na * nb);
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
  return cosine_similarity(a.vector, b.vector);
}

Embedding centroid(const std::vector<Embedding>& embeddings) {
  if (embeddings.empty()) throw ValidationError("centroid of empty embedding list");
  const std::size_t dim = embeddings.front().dimension();
  Embedding out;
  out.vector.assign(dim, 0.0);
  out.recording_id = embeddings.front().recording_id;
  double onset = std::numeric_limits<double>::infinity();
  double offset = -std::numeric_limits<double>::infinity();
  for (const Embedding& e : embeddings) {
    if (e.dimension() != dim) throw ValidationError("centroid: mixed embedding dimensions");
    for (std::size_t i = 0; i < dim; ++i) out.vector[i] += e.vector[i];
    onset = std::min(onset, e.segment.onset);
    offset = std::max(offset, e.segment.offset);
  }
  for (double& x : out.vector) x /= static_cast<double>(embeddings.size());
  out.segment = {onset, offset};
  return out;
}

SyntheticProvider::SyntheticProvider(std::map<std::string, Timeline> truth,
                                     std::vector<SyntheticSpeakerModel> speakers)
    : truth_(std::move(truth)) {
  if (speakers.empty()) throw ValidationError("synthetic provider needs >= 1 speaker model");
  dimension_ = speakers.front().centroid.size();
  for (auto& s : speakers) {
    if (s.centroid.size() != dimension_)
      throw ValidationError("synthetic provider: mixed centroid dimensions");
    double n = norm(s.centroid);
    if (std::abs(n - 1.0) > 1e-6)
      throw ValidationError("synthetic centroid for '" + s.speaker_id + "' is not unit norm");
    speakers_.emplace(s.speaker_id, std::move(s));
  }
}

const std::vector<double>& SyntheticProvider::speaker_centroid(
    const std::string& speaker_id) const {
  auto it = speakers_.find(speaker_id);
  if (it == speakers_.end()) throw ProviderError("unknown synthetic speaker: " + speaker_id);
  return it->second.centroid;
}

std::vector<Embedding> SyntheticProvider::embed(const std::string& recording_id,
                                                const std::vector<Interval>& segments) const {
  auto rec = truth_.find(recording_id);
  if (rec == truth_.end())
    throw ProviderError("synthetic provider has no truth for recording '" + recording_id + "'");

  std::vector<Embedding> out;
  out.reserve(segments.size());
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Interval& seg = segments[i];
    // Dominant speaker = maximum overlapped duration; iteration is
    // lexicographic, so ties go to the smaller label.
    std::string best;
    double best_overlap = 0.0;
    for (const std::string& spk : rec->second.speakers()) {
      double ov =
          total_length(intersect_intervals(rec->second.speaker_intervals(spk), {seg}));
      if (ov > best_overlap + 1e-12) {
        best_overlap = ov;
        best = spk;
      }
    }
    if (best.empty())
      throw ProviderError("segment " + std::to_string(i) + " [" + std::to_string(seg.onset) +
                          ", " + std::to_string(seg.offset) +
                          ") overlaps no truth speaker in '" + recording_id + "'");
    const SyntheticSpeakerModel& model = speakers_.at(best);

    Embedding e;
    e.recording_id = recording_id;
    e.segment = seg;
    e.vector = model.centroid;
    if (model.noise_scale > 0.0) {
      // Randomness keyed by (seed, recording, segment): call order never matters.
      std::uint64_t h = mix64(model.seed);
      h = hash_string(h, recording_id);
      h = hash_combine(h, double_bits(seg.onset));
      h = hash_combine(h, double_bits(seg.offset));
      std::mt19937_64 rng(h);
      // Per-dimension sigma keeps the expected noise norm at noise_scale
      // regardless of dimension.
      std::normal_distribution<double> gauss(
          0.0, model.noise_scale / std::sqrt(static_cast<double>(e.vector.size())));
      for (double& x : e.vector) x += gauss(rng);
      double n = norm(e.vector);
      if (n == 0.0) n = 1.0;
      for (double& x : e.vector) x /= n;
    }
    out.push_back(std::move(e));
  }
  return out;
}

FileEmbeddingProvider::FileEmbeddingProvider(std::string recording_id,
                                             std::vector<Embedding> embeddings)
    : recording_id_(std::move(recording_id)), embeddings_(std::move(embeddings)) {
  if (embeddings_.empty()) throw ValidationError("file embedding provider: no embeddings");
  dimension_ = embeddings_.front().dimension();
  for (const Embedding& e : embeddings_)
    if (e.dimension() != dimension_)
      throw ValidationError("file embedding provider: mixed dimensions");
}

FileEmbeddingProvider FileEmbeddingProvider::from_file(const std::string& recording_id,
                                                       const std::string& path) {
  return FileEmbeddingProvider(recording_id, load_embedding_file(path));
}

std::vector<Embedding> FileEmbeddingProvider::embed(const std::string& recording_id,
                                                    const std::vector<Interval>& segments) const {
  if (recording_id != recording_id_)
    throw ProviderError("embedding file covers '" + recording_id_ + "', requested '" +
                        recording_id + "'");
  constexpr double kTol = 0.005;  // half a 10 ms frame
  std::vector<Embedding> out;
  out.reserve(segments.size());
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Interval& seg = segments[i];
    const Embedding* found = nullptr;
    for (const Embedding& e : embeddings_) {
      if (std::abs(e.segment.onset - seg.onset) <= kTol &&
          std::abs(e.segment.offset - seg.offset) <= kTol) {
        found = &e;
        break;
      }
    }
    if (!found)
      throw ProviderError("no stored embedding for segment " + std::to_string(i) + " [" +
                          std::to_string(seg.onset) + ", " + std::to_string(seg.offset) + ")");
    Embedding e = *found;
    e.segment = seg;
    out.push_back(std::move(e));
  }
  return out;
}

PosteriorTrack load_posterior(std::istream& in, const std::string& origin) {
  std::string magic;
  if (!(in >> magic) || magic != "PST1")
    throw ParseError(origin + ": expected PST1 header");
  double fps = 0.0;
  std::size_t frames = 0, channels = 0;
  std::string labels;
  if (!(in >> fps >> frames >> channels >> labels))
    throw ParseError(origin + ": malformed PST1 header");
  PosteriorTrack track;
  track.frame_rate = fps;
  track.frames = frames;
  std::stringstream label_stream(labels);
  std::string label;
  while (std::getline(label_stream, label, ',')) track.channel_labels.push_back(label);
  if (track.channel_labels.size() != channels)
    throw ParseError(origin + ": header declares " + std::to_string(channels) +
                     " channels but " + std::to_string(track.channel_labels.size()) +
                     " labels");
  track.values.resize(frames * channels);
  for (std::size_t f = 0; f < frames; ++f)
    for (std::size_t c = 0; c < channels; ++c) {
      double v;
      if (!(in >> v))
        throw ParseError(origin + ": truncated payload at frame " + std::to_string(f));
      if (!(v >= 0.0 && v <= 1.0))
        throw ValidationError(origin + ": value " + std::to_string(v) +
                              " out of [0,1] at frame " + std::to_string(f));
      track.at(f, c) = v;
    }
  validate_track(track);
  return track;
}

PosteriorTrack load_posterior_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open posterior file: " + path);
  return load_posterior(in, path);
}

void write_posterior(std::ostream& out, const PosteriorTrack& track) {
  validate_track(track);
  std::string text = "PST1 ";
  format_double(text, track.frame_rate);
  text += ' ';
  text += std::to_string(track.frames);
  text += ' ';
  text += std::to_string(track.channels());
  text += ' ';
  for (std::size_t c = 0; c < track.channels(); ++c) {
    const std::string& label = track.channel_labels[c];
    if (label.empty() || label.find_first_of(", \t\n") != std::string::npos)
      throw ValidationError("channel label unsuitable for PST1 header: '" + label + "'");
    if (c) text += ',';
    text += label;
  }
  text += '\n';
  for (std::size_t f = 0; f < track.frames; ++f) {
    for (std::size_t c = 0; c < track.channels(); ++c) {
      if (c) text += ' ';
      format_double(text, track.at(f, c));
    }
    text += '\n';
  }
  out << text;
}

void write_posterior_file(const std::string& path, const PosteriorTrack& track) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write posterior file: " + path);
  write_posterior(out, track);
}

std::vector<Embedding> load_embeddings(std::istream& in, const std::string& origin) {
  std::string magic;
  if (!(in >> magic) || magic != "EMB1")
    throw ParseError(origin + ": expected EMB1 header");
  std::size_t dim = 0, count = 0;
  if (!(in >> dim >> count)) throw ParseError(origin + ": malformed EMB1 header");
  std::vector<Embedding> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Embedding e;
    if (!(in >> e.segment.onset >> e.segment.offset))
      throw ParseError(origin + ": truncated entry " + std::to_string(i));
    e.vector.resize(dim);
    for (std::size_t d = 0; d < dim; ++d)
      if (!(in >> e.vector[d]))
        throw ParseError(origin + ": truncated vector in entry " + std::to_string(i));
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<Embedding> load_embedding_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file: " + path);
  return load_embeddings(in, path);
}

void write_embeddings(std::ostream& out, const std::vector<Embedding>& embeddings) {
  std::size_t dim = embeddings.empty() ? 0 : embeddings.front().dimension();
  std::string text = "EMB1 " + std::to_string(dim) + ' ' + std::to_string(embeddings.size());
  text += '\n';
  for (const Embedding& e : embeddings) {
    if (e.dimension() != dim) throw ValidationError("write_embeddings: mixed dimensions");
    format_double(text, e.segment.onset);
    text += ' ';
    format_double(text, e.segment.offset);
    for (double v : e.vector) {
      text += ' ';
      format_double(text, v);
    }
    text += '\n';
  }
  out << text;
}

void write_embedding_file(const std::string& path, const std::vector<Embedding>& embeddings) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write embedding file: " + path);
  write_embeddings(out, embeddings);
}

std::vector<double> random_unit_vector(std::size_t dimension, std::uint64_t seed) {
  if (dimension == 0) throw ValidationError("random_unit_vector: dimension must be >= 1");
  std::mt19937_64 rng(mix64(seed));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(dimension);
  double n = 0.0;
  while (n == 0.0) {
    for (double& x : v) x = gauss(rng);
    n = norm(v);
  }
  for (double& x : v) x /= n;
  return v;
}

}  // namespace diar
