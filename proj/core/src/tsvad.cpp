#include "diar/tsvad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "diar/errors.hpp"

namespace diar {

namespace {
constexpr double kEps = 1e-9;
}

std::vector<std::string> TargetSet::retained_labels() const {
  std::vector<std::string> out;
  for (const Turn& t : retained_turns) out.push_back(t.speaker);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void TimeMap::add_piece(double local_onset, double local_offset, double original_onset) {
  if (!(local_offset > local_onset)) throw ValidationError("time map piece must have length");
  if (!pieces_.empty() && std::abs(pieces_.back().local_offset - local_onset) > kEps)
    throw ValidationError("time map pieces must be contiguous in local time");
  pieces_.push_back({local_onset, local_offset, original_onset});
}

std::vector<Interval> TimeMap::to_original(const Interval& local) const {
  std::vector<Interval> out;
  for (const Piece& p : pieces_) {
    double lo = std::max(local.onset, p.local_onset);
    double hi = std::min(local.offset, p.local_offset);
    if (hi > lo + kEps)
      out.push_back({p.original_onset + (lo - p.local_onset),
                     p.original_onset + (hi - p.local_onset)});
  }
  return out;
}

std::optional<double> TimeMap::to_original_point(double local) const {
  for (const Piece& p : pieces_)
    if (local >= p.local_onset - kEps && local < p.local_offset)
      return p.original_onset + (local - p.local_onset);
  return std::nullopt;
}

double TimeMap::local_onset() const {
  return pieces_.empty() ? 0.0 : pieces_.front().local_onset;
}

double TimeMap::local_extent() const {
  return pieces_.empty() ? 0.0 : pieces_.back().local_offset;
}

TargetSet select_targets(const Timeline& diarization, const EmbeddingProvider& provider,
                         const TsvadConfig& config) {
  if (diarization.empty()) throw ValidationError("select_targets: empty diarization");
  if (config.max_targets < 1) throw ValidationError("select_targets: max_targets must be >= 1");

  struct Ranked {
    std::string speaker;
    double duration;
  };
  std::vector<Ranked> ranked;
  for (const std::string& spk : diarization.speakers())
    ranked.push_back({spk, diarization.speaker_duration(spk)});
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.duration != b.duration) return a.duration > b.duration;
    return a.speaker < b.speaker;
  });

  TargetSet out;
  std::vector<std::string> retained;
  for (const Ranked& r : ranked) {
    if (r.duration + kEps >= config.min_target_speech && out.targets.size() < config.max_targets) {
      std::vector<Interval> segments = diarization.speaker_intervals(r.speaker);
      std::vector<Embedding> parts;
      try {
        parts = provider.embed(diarization.recording_id(), segments);
      } catch (const Error& e) {
        throw ProviderError("target embedding failed for speaker '" + r.speaker +
                            "': " + e.what());
      }
      out.targets.emplace_back(r.speaker, centroid(parts));
    } else {
      retained.push_back(r.speaker);
    }
  }
  out.padded_slots = config.max_targets - out.targets.size();
  for (const Turn& t : diarization.turns())
    if (std::find(retained.begin(), retained.end(), t.speaker) != retained.end())
      out.retained_turns.push_back(t);
  return out;
}

std::vector<TsvadChunk> chunk_recording(const std::vector<Interval>& speech,
                                        double chunk_length) {
  if (speech.empty()) throw ValidationError("chunk_recording: empty speech region list");
  if (!(chunk_length > 0.0)) throw ValidationError("chunk_recording: chunk_length must be > 0");

  // Lay speech out on a concatenated axis, then cut at chunk boundaries.
  std::vector<TsvadChunk> chunks;
  double local = 0.0;
  TsvadChunk current;
  double chunk_start = 0.0;

  auto close_chunk = [&](double local_end) {
    current.local = {chunk_start, local_end};
    chunks.push_back(std::move(current));
    current = TsvadChunk{};
    chunk_start = local_end;
  };

  for (const Interval& region : speech) {
    double remaining_onset = region.onset;
    double remaining = region.length();
    while (remaining > kEps) {
      double room = (chunk_start + chunk_length) - local;
      double take = std::min(remaining, room);
      current.map.add_piece(local, local + take, remaining_onset);
      local += take;
      remaining_onset += take;
      remaining -= take;
      if (local >= chunk_start + chunk_length - kEps) close_chunk(local);
    }
  }
  if (!current.map.empty()) close_chunk(local);
  return chunks;
}

Timeline decode_decisions(const PosteriorTrack& posterior, const TargetSet& targets,
                          double threshold, const TimeMap& time_map,
                          const std::string& recording_id) {
  validate_track(posterior);
  const std::size_t slots = targets.targets.size() + targets.padded_slots;
  if (posterior.channels() != slots)
    throw ValidationError("decode_decisions: posterior has " +
                          std::to_string(posterior.channels()) + " channels, expected " +
                          std::to_string(slots));

  Timeline out(recording_id);
  const double base = time_map.local_onset();  // frame 0 sits at the map origin
  for (std::size_t c = 0; c < targets.targets.size(); ++c) {
    std::vector<unsigned char> active(posterior.frames);
    for (std::size_t f = 0; f < posterior.frames; ++f)
      active[f] = posterior.at(f, c) >= threshold ? 1 : 0;
    for (const Interval& run : frames_to_intervals(active, posterior.frame_rate)) {
      Interval local{run.onset + base, run.offset + base};
      for (const Interval& orig : time_map.to_original(local))
        if (orig.length() > kEps)
          out.insert(Turn{targets.targets[c].first, orig.onset, orig.length()});
    }
  }
  for (const Turn& t : targets.retained_turns) out.insert(t);
  return out;
}

PosteriorTrack EchoTsvadScorer::score_chunk(const std::string& /*recording_id*/,
                                            const TsvadChunk& chunk, const TargetSet& targets,
                                            const TsvadConfig& config) const {
  const std::size_t slots = targets.targets.size() + targets.padded_slots;
  PosteriorTrack track;
  track.frame_rate = config.frame_rate;
  track.frames = static_cast<std::size_t>(
      std::llround(chunk.local.length() * config.frame_rate));
  for (std::size_t c = 0; c < slots; ++c) track.channel_labels.push_back("t" + std::to_string(c));
  track.values.assign(track.frames * slots, 0.0);

  for (std::size_t c = 0; c < targets.targets.size(); ++c) {
    std::vector<Interval> activity = source_.speaker_intervals(targets.targets[c].first);
    for (std::size_t f = 0; f < track.frames; ++f) {
      double local_center = chunk.local.onset + (f + 0.5) / config.frame_rate;
      auto t = chunk.map.to_original_point(local_center);
      if (!t) continue;
      for (const Interval& iv : activity)
        if (*t >= iv.onset && *t < iv.offset) {
          track.at(f, c) = 0.9;
          break;
        }
    }
  }
  return track;
}

FileTsvadScorer::FileTsvadScorer(PosteriorTrack full_track) : full_(std::move(full_track)) {
  validate_track(full_);
}

PosteriorTrack FileTsvadScorer::score_chunk(const std::string& /*recording_id*/,
                                            const TsvadChunk& chunk,
                                            const TargetSet& /*targets*/,
                                            const TsvadConfig& /*config*/) const {
  auto [first, last] = frame_index_range(chunk.local.onset, chunk.local.offset, full_.frame_rate);
  first = std::min<std::size_t>(first, full_.frames);
  last = std::min<std::size_t>(last, full_.frames);
  PosteriorTrack out;
  out.frame_rate = full_.frame_rate;
  out.channel_labels = full_.channel_labels;
  out.frames = last - first;
  const std::size_t c = full_.channels();
  out.values.assign(full_.values.begin() + static_cast<std::ptrdiff_t>(first * c),
                    full_.values.begin() + static_cast<std::ptrdiff_t>(last * c));
  return out;
}

Timeline tsvad_refine(const Timeline& diarization, const EmbeddingProvider& provider,
                      const TsvadScorer& scorer, const TsvadConfig& config) {
  TargetSet targets = select_targets(diarization, provider, config);
  std::vector<Interval> speech = speech_regions(diarization, config.frame_rate);
  std::vector<TsvadChunk> chunks = chunk_recording(speech, config.chunk_length);

  Timeline out(diarization.recording_id());
  for (const TsvadChunk& chunk : chunks) {
    PosteriorTrack posterior =
        scorer.score_chunk(diarization.recording_id(), chunk, targets, config);
    Timeline piece = decode_decisions(posterior, targets, config.decision_threshold, chunk.map,
                                      diarization.recording_id());
    for (const Turn& t : piece.turns()) out.insert(t);
  }
  return out;
}

namespace {

FrameLabelMatrix clean_labels(const FrameLabelMatrix& labels) {
  // Keep speakers with activity, then drop global non-speech frames.
  std::vector<std::size_t> keep_cols;
  for (std::size_t s = 0; s < labels.num_speakers(); ++s) {
    bool any = false;
    for (std::size_t f = 0; f < labels.frames && !any; ++f) any = labels.at(f, s) != 0;
    if (any) keep_cols.push_back(s);
  }
  std::vector<std::size_t> keep_rows;
  for (std::size_t f = 0; f < labels.frames; ++f) {
    bool any = false;
    for (std::size_t s : keep_cols)
      if (labels.at(f, s)) {
        any = true;
        break;
      }
    if (any) keep_rows.push_back(f);
  }

  FrameLabelMatrix out;
  out.frame_rate = labels.frame_rate;
  out.frames = keep_rows.size();
  for (std::size_t s : keep_cols) out.speaker_order.push_back(labels.speaker_order[s]);
  out.values.resize(out.frames * out.speaker_order.size());
  for (std::size_t r = 0; r < keep_rows.size(); ++r)
    for (std::size_t c = 0; c < keep_cols.size(); ++c)
      out.at(r, c) = labels.at(keep_rows[r], keep_cols[c]);
  return out;
}

}  // namespace

std::vector<std::int16_t> fill_speaker_track(const FrameLabelMatrix& labels, std::size_t column,
                                             const SpeakerSource& source,
                                             std::size_t samples_per_frame) {
  std::vector<std::int16_t> track(labels.frames * samples_per_frame, 0);

  // Sequential consumption over the concatenated source stream.
  std::size_t seg = 0, pos = 0;
  std::size_t available = 0;
  for (const auto& s : source.segments) available += s.size();

  std::size_t f = 0;
  while (f < labels.frames) {
    if (!labels.at(f, column)) {
      ++f;
      continue;
    }
    std::size_t run_end = f;
    while (run_end < labels.frames && labels.at(run_end, column)) ++run_end;
    std::size_t needed = (run_end - f) * samples_per_frame;
    std::size_t write_at = f * samples_per_frame;
    for (std::size_t i = 0; i < needed; ++i) {
      while (seg < source.segments.size() && pos >= source.segments[seg].size()) {
        ++seg;
        pos = 0;
      }
      if (seg >= source.segments.size()) {
        double shortfall =
            static_cast<double>(needed - i) / static_cast<double>(source.sample_rate);
        throw ValidationError("simulation source for speaker '" + source.speaker +
                              "' exhausted, short by " + std::to_string(shortfall) + " s");
      }
      track[write_at + i] = source.segments[seg][pos++];
    }
    f = run_end;
  }
  return track;
}

SimulationResult simulate_mixture(const SimulationRecipe& recipe) {
  if (recipe.output_sample_rate <= 0)
    throw ValidationError("simulate_mixture: output sample rate must be positive");
  if (recipe.labels.frame_rate <= 0.0)
    throw ValidationError("simulate_mixture: label frame rate must be positive");
  double spf_real = static_cast<double>(recipe.output_sample_rate) / recipe.labels.frame_rate;
  auto spf = static_cast<std::size_t>(std::llround(spf_real));
  if (spf < 1 || std::abs(spf_real - static_cast<double>(spf)) > 1e-9)
    throw ValidationError("simulate_mixture: sample rate must be an integer multiple of the "
                          "label frame rate");

  FrameLabelMatrix labels = clean_labels(recipe.labels);

  SimulationResult result;
  result.labels = labels;
  result.samples.assign(labels.frames * spf, 0);
  std::vector<std::int32_t> acc(labels.frames * spf, 0);

  for (std::size_t c = 0; c < labels.num_speakers(); ++c) {
    const std::string& speaker = labels.speaker_order[c];
    const SpeakerSource* source = nullptr;
    for (const SpeakerSource& s : recipe.sources)
      if (s.speaker == speaker) {
        source = &s;
        break;
      }
    if (!source)
      throw ValidationError("simulate_mixture: no source audio for speaker '" + speaker + "'");
    if (source->sample_rate != recipe.output_sample_rate)
      throw ValidationError("simulate_mixture: source sample rate for '" + speaker +
                            "' differs from output rate (no resampling)");
    std::vector<std::int16_t> track = fill_speaker_track(labels, c, *source, spf);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += track[i];
  }

  constexpr std::int32_t lo = std::numeric_limits<std::int16_t>::min();
  constexpr std::int32_t hi = std::numeric_limits<std::int16_t>::max();
  for (std::size_t i = 0; i < acc.size(); ++i)
    result.samples[i] = static_cast<std::int16_t>(std::clamp(acc[i], lo, hi));
  return result;
}

}  // namespace diar
