// diarkit: offline speaker-diarization pipeline toolkit.
//
// Subcommands mirror the pipeline stages (score, vad, ahc, sc, overlap,
// pair-refine, tsvad-refine, simulate, fuse) plus `run` for configured
// end-to-end execution. Exit codes: 0 success, 1 per-recording failure,
// 2 configuration error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "diar/ahc.hpp"
#include "diar/errors.hpp"
#include "diar/fusion.hpp"
#include "diar/metrics.hpp"
#include "diar/overlap.hpp"
#include "diar/pipeline.hpp"
#include "diar/providers.hpp"
#include "diar/spectral.hpp"
#include "diar/timeline.hpp"
#include "diar/tsvad.hpp"
#include "diar/vad.hpp"
#include "diar/wav.hpp"

namespace fs = std::filesystem;
using namespace diar;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRecordingFailure = 1;
constexpr int kExitConfigError = 2;

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

// Shared synthetic-provider options for ahc/sc/tsvad-refine.
struct SyntheticOpts {
  std::string truth_rttm;
  std::size_t dimension = 128;
  double noise_scale = 0.0;
  std::uint64_t seed = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--synthetic-truth", truth_rttm,
                    "ground-truth RTTM driving the synthetic embedding provider");
    cmd->add_option("--dim", dimension, "synthetic embedding dimension")
        ->capture_default_str();
    cmd->add_option("--noise", noise_scale, "synthetic embedding noise scale")
        ->capture_default_str();
    cmd->add_option("--seed", seed, "synthetic provider seed")->capture_default_str();
  }

  std::shared_ptr<SyntheticProvider> build(std::optional<std::uint64_t> seed_override) const {
    auto truth = load_rttm_file(truth_rttm);
    std::vector<std::string> labels;
    for (const auto& [rec, tl] : truth)
      for (const std::string& s : tl.speakers()) labels.push_back(s);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    std::uint64_t base = seed_override.value_or(seed);
    std::vector<SyntheticSpeakerModel> models;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      SyntheticSpeakerModel m;
      m.speaker_id = labels[i];
      m.noise_scale = noise_scale;
      m.seed = base + i + 1;
      m.centroid = random_unit_vector(dimension, base * 0x9e3779b9ULL + i);
      models.push_back(std::move(m));
    }
    return std::make_shared<SyntheticProvider>(std::move(truth), std::move(models));
  }
};

void print_score_line(std::FILE* out, const std::string& rec, const DiarizationScore& s) {
  std::fprintf(out,
               "%-16s DER %6.2f%%  JER %6.2f%%  (miss %.2f, fa %.2f, conf %.2f; "
               "ref speech %.2f s)\n",
               rec.c_str(), s.der, s.jer, s.miss, s.false_alarm, s.confusion,
               s.total_reference_speech);
}

std::string kv_score_block(const std::string& prefix, const DiarizationScore& s) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%s.der=%.6f\n%s.jer=%.6f\n%s.miss=%.6f\n%s.false_alarm=%.6f\n"
                "%s.confusion=%.6f\n%s.ref_speech=%.6f\n",
                prefix.c_str(), s.der, prefix.c_str(), s.jer, prefix.c_str(), s.miss,
                prefix.c_str(), s.false_alarm, prefix.c_str(), s.confusion, prefix.c_str(),
                s.total_reference_speech);
  return buf;
}

int cmd_score(const std::string& hyp_path, const std::string& ref_path, double collar,
              bool no_overlap, const std::string& kv_path) {
  auto hyps = load_rttm_file(hyp_path);
  auto refs = load_rttm_file(ref_path);

  std::string kv;
  double speech_sum = 0.0, der_sum = 0.0, miss_sum = 0.0, fa_sum = 0.0, conf_sum = 0.0;
  double jer_sum = 0.0, jer_weight = 0.0;
  bool any = false;
  for (const auto& [rec, ref] : refs) {
    auto hyp = hyps.find(rec);
    Timeline hypothesis = hyp == hyps.end() ? Timeline(rec) : hyp->second;
    if (hyp == hyps.end())
      std::fprintf(stderr, "warning: recording '%s' absent from hypothesis, scoring empty\n",
                   rec.c_str());
    DiarizationScore s = score_der(hypothesis, ref, collar, !no_overlap);
    print_score_line(stdout, rec.c_str(), s);
    kv += kv_score_block(rec, s);
    speech_sum += s.total_reference_speech;
    der_sum += s.der * s.total_reference_speech;
    miss_sum += s.miss * s.total_reference_speech;
    fa_sum += s.false_alarm * s.total_reference_speech;
    conf_sum += s.confusion * s.total_reference_speech;
    double w = static_cast<double>(ref.speakers().size());
    jer_sum += s.jer * w;
    jer_weight += w;
    any = true;
  }
  if (!any) throw ValidationError("reference RTTM contains no recordings");
  if (refs.size() > 1) {
    DiarizationScore overall;
    overall.der = der_sum / speech_sum;
    overall.miss = miss_sum / speech_sum;
    overall.false_alarm = fa_sum / speech_sum;
    overall.confusion = conf_sum / speech_sum;
    overall.jer = jer_weight > 0.0 ? jer_sum / jer_weight : 0.0;
    overall.total_reference_speech = speech_sum;
    print_score_line(stdout, "OVERALL", overall);
    kv += kv_score_block("overall", overall);
  }
  if (!kv_path.empty()) {
    if (kv_path == "-") {
      std::fputs(kv.c_str(), stdout);
    } else {
      std::ofstream out(kv_path);
      if (!out) throw IoError("cannot write report: " + kv_path);
      out << kv;
    }
  }
  return kExitOk;
}

int cmd_vad(const std::vector<std::string>& posterior_paths, double threshold,
            double min_speech, const std::string& out_path, const std::string& rttm_path,
            std::string recording) {
  std::vector<PosteriorTrack> tracks;
  for (const std::string& p : posterior_paths) tracks.push_back(load_posterior_file(p));
  PosteriorTrack fused = fuse_tracks(tracks);
  VadDecision decision = decide_speech(fused, threshold, min_speech);
  double max_fps = fused.frame_rate;
  for (const PosteriorTrack& t : tracks)
    decision.source_resolutions.push_back(
        static_cast<int>(std::llround(max_fps / t.frame_rate)));

  write_speech_regions_file(out_path, decision.speech_intervals);
  std::fprintf(stdout, "%zu speech region(s), threshold %.2f, %.2f s total\n",
               decision.speech_intervals.size(), decision.threshold_used,
               total_length(decision.speech_intervals));
  if (!rttm_path.empty()) {
    if (recording.empty()) recording = stem_of(posterior_paths.front());
    Timeline t(recording);
    for (const Interval& iv : decision.speech_intervals)
      t.insert(Turn{"speech", iv.onset, iv.length()});
    write_rttm_file(rttm_path, {{recording, t}});
  }
  return kExitOk;
}

std::shared_ptr<const EmbeddingProvider> make_cli_provider(
    const SyntheticOpts& synth, const std::string& embeddings_path, const std::string& recording,
    std::optional<std::uint64_t> seed_override) {
  if (!embeddings_path.empty())
    return std::make_shared<FileEmbeddingProvider>(
        FileEmbeddingProvider::from_file(recording, embeddings_path));
  if (!synth.truth_rttm.empty()) return synth.build(seed_override);
  throw ConfigError("either --embeddings or --synthetic-truth is required");
}

int cmd_cluster(bool spectral, const std::string& speech_path,
                const std::string& embeddings_path, const SyntheticOpts& synth,
                std::string recording, const std::string& out_path, const AhcConfig& ahc,
                const ScConfig& sc, std::optional<std::size_t> num_speakers,
                const std::string& scorer_spec, std::optional<std::uint64_t> seed_override) {
  if (recording.empty()) recording = stem_of(speech_path);
  std::vector<Interval> speech = load_speech_regions_file(speech_path);

  Timeline result(recording);
  if (!spectral) {
    auto provider = make_cli_provider(synth, embeddings_path, recording, seed_override);
    result = ahc_diarize(recording, speech, *provider, ahc);
  } else if (scorer_spec.rfind("file:", 0) == 0) {
    // Precomputed affinity over the uniform segmentation: an index-coded
    // provider plus a lookup scorer route the file matrix through the normal
    // spectral path (symmetrization is a no-op on a symmetric matrix).
    AffinityMatrix affinity = load_affinity_file(scorer_spec.substr(5));
    std::vector<Interval> segments = uniform_segments(speech, sc.window, sc.shift);
    if (affinity.n != segments.size())
      throw ValidationError("affinity order " + std::to_string(affinity.n) +
                            " does not match " + std::to_string(segments.size()) +
                            " segments");
    if (!affinity.symmetric)
      throw ValidationError("affinity file must contain a symmetric matrix");

    class IndexProvider : public EmbeddingProvider {
     public:
      std::size_t dimension() const override { return 1; }
      std::vector<Embedding> embed(const std::string& rec,
                                   const std::vector<Interval>& segs) const override {
        std::vector<Embedding> out;
        for (std::size_t i = 0; i < segs.size(); ++i)
          out.push_back(Embedding{{static_cast<double>(i)}, segs[i], rec});
        return out;
      }
    };
    class LookupScorer : public PairwiseScorer {
     public:
      explicit LookupScorer(const AffinityMatrix& a) : a_(a) {}
      std::vector<double> score_row(const Embedding& anchor,
                                    std::span<const Embedding> candidates) const override {
        auto i = static_cast<std::size_t>(std::llround(anchor.vector[0]));
        std::vector<double> out;
        for (const Embedding& c : candidates)
          out.push_back(a_.at(i, static_cast<std::size_t>(std::llround(c.vector[0]))));
        return out;
      }

     private:
      const AffinityMatrix& a_;
    };
    IndexProvider index_provider;
    LookupScorer lookup(affinity);
    result = spectral_diarize(recording, speech, index_provider, lookup, sc, num_speakers);
  } else if (scorer_spec == "stub-cosine") {
    auto provider = make_cli_provider(synth, embeddings_path, recording, seed_override);
    CosineStubScorer scorer;
    result = spectral_diarize(recording, speech, *provider, scorer, sc, num_speakers);
  } else {
    throw ConfigError("unknown scorer '" + scorer_spec + "' (stub-cosine or file:<path>)");
  }

  write_rttm_file(out_path, {{recording, result}});
  std::fprintf(stdout, "%s: %zu speaker(s), %.2f s speech\n", recording.c_str(),
               result.speakers().size(), result.total_speech());
  return kExitOk;
}

int cmd_overlap(const std::vector<std::string>& posterior_paths,
                const std::string& diarization_path, double threshold,
                const std::string& out_path) {
  auto timelines = load_rttm_file(diarization_path);
  std::vector<PosteriorTrack> tracks;
  for (const std::string& p : posterior_paths) tracks.push_back(load_posterior_file(p));
  PosteriorTrack fused = fuse_tracks(tracks);
  std::vector<Interval> regions = detect_overlap_regions(fused, threshold);

  std::map<std::string, Timeline> out;
  std::size_t applied = 0, skipped = 0;
  for (auto& [rec, timeline] : timelines) {
    std::vector<OverlapRegion> assigned;
    for (const Interval& region : regions) {
      if (auto r = assign_two_closest_speakers(region, timeline)) {
        assigned.push_back(*r);
        ++applied;
      } else {
        ++skipped;
        std::fprintf(stderr, "warning: %s: region [%.2f, %.2f] skipped (fewer than 2 speakers)\n",
                     rec.c_str(), region.onset, region.offset);
      }
    }
    out.emplace(rec, apply_overlap_regions(timeline, assigned));
  }
  write_rttm_file(out_path, out);
  std::fprintf(stdout, "%zu overlap region(s) applied, %zu skipped\n", applied, skipped);
  return kExitOk;
}

int cmd_pair_refine(const std::string& diarization_path, const std::string& pair_dir,
                    double threshold, std::size_t top_k, double chunk_length,
                    const std::string& out_path) {
  auto timelines = load_rttm_file(diarization_path);
  FilePairScorer scorer(pair_dir);
  std::map<std::string, Timeline> out;
  std::size_t failed_total = 0;
  for (auto& [rec, timeline] : timelines) {
    std::size_t failed = 0;
    out.emplace(rec,
                pairwise_tsvad_overlap(timeline, scorer, top_k, threshold, chunk_length,
                                       &failed));
    if (failed)
      std::fprintf(stderr, "warning: %s: %zu pair(s) skipped\n", rec.c_str(), failed);
    failed_total += failed;
  }
  write_rttm_file(out_path, out);
  return failed_total == 0 ? kExitOk : kExitRecordingFailure;
}

int cmd_tsvad_refine(const std::string& diarization_path, const std::string& scorer_spec,
                     const std::string& posterior_dir, const SyntheticOpts& synth,
                     const std::string& embeddings_path, const TsvadConfig& config,
                     const std::string& out_path, std::optional<std::uint64_t> seed_override) {
  auto timelines = load_rttm_file(diarization_path);
  std::map<std::string, Timeline> out;
  bool any_failed = false;
  for (auto& [rec, timeline] : timelines) {
    try {
      std::shared_ptr<const EmbeddingProvider> provider =
          make_cli_provider(synth, embeddings_path, rec, seed_override);
      if (scorer_spec == "echo") {
        EchoTsvadScorer scorer(timeline);
        out.emplace(rec, tsvad_refine(timeline, *provider, scorer, config));
      } else if (scorer_spec == "file") {
        FileTsvadScorer scorer(load_posterior_file(posterior_dir + "/" + rec + ".pst"));
        out.emplace(rec, tsvad_refine(timeline, *provider, scorer, config));
      } else {
        throw ConfigError("unknown tsvad scorer '" + scorer_spec + "' (echo or file)");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      any_failed = true;
      std::fprintf(stderr, "error: %s: %s\n", rec.c_str(), e.what());
    }
  }
  write_rttm_file(out_path, out);
  return any_failed ? kExitRecordingFailure : kExitOk;
}

int cmd_simulate(const std::string& reference_path, const std::string& manifest_path,
                 int sample_rate, double frame_rate, const std::string& out_wav,
                 const std::string& out_rttm, const std::string& out_dir,
                 const std::string& recording) {
  auto references = load_rttm_file(reference_path);

  // Manifest: "<speaker> <wav path>" per line, consumed in order.
  std::ifstream manifest(manifest_path);
  if (!manifest) throw IoError("cannot open manifest: " + manifest_path);
  std::map<std::string, SpeakerSource> sources;
  std::string speaker, path;
  while (manifest >> speaker >> path) {
    WavData wav = read_wav_file(path);
    auto [it, inserted] = sources.try_emplace(speaker);
    if (inserted) {
      it->second.speaker = speaker;
      it->second.sample_rate = wav.sample_rate;
    }
    it->second.segments.push_back(std::move(wav.samples));
  }

  std::vector<std::pair<std::string, Timeline>> selected;
  if (!recording.empty()) {
    auto it = references.find(recording);
    if (it == references.end())
      throw ConfigError("recording '" + recording + "' not in reference RTTM");
    selected.emplace_back(*it);
  } else {
    selected.assign(references.begin(), references.end());
  }
  if (selected.size() > 1 && out_dir.empty())
    throw ConfigError("multiple recordings: use --out-dir or pick one with --recording");

  for (const auto& [rec, timeline] : selected) {
    SimulationRecipe recipe;
    auto frames = static_cast<std::size_t>(std::ceil(timeline.extent() * frame_rate - 1e-9));
    recipe.labels = timeline_to_label_matrix(timeline, frame_rate, frames);
    recipe.output_sample_rate = sample_rate;
    for (const auto& [spk, source] : sources) recipe.sources.push_back(source);

    SimulationResult sim = simulate_mixture(recipe);
    std::string wav_path = out_wav, rttm_path = out_rttm;
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      wav_path = (fs::path(out_dir) / (rec + ".wav")).string();
      rttm_path = (fs::path(out_dir) / (rec + ".rttm")).string();
    }
    if (wav_path.empty()) throw ConfigError("--out-wav (or --out-dir) is required");
    write_wav_file(wav_path, WavData{sample_rate, sim.samples});
    if (!rttm_path.empty()) {
      Timeline aligned = label_matrix_to_timeline(sim.labels, rec);
      write_rttm_file(rttm_path, {{rec, aligned}});
    }
    std::fprintf(stdout, "%s: %zu samples, %zu frame(s), %zu speaker(s)\n", rec.c_str(),
                 sim.samples.size(), sim.labels.frames, sim.labels.num_speakers());
  }
  return kExitOk;
}

std::vector<double> parse_csv_numbers(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

int cmd_fuse(const std::vector<std::string>& rttm_paths, const std::string& weights_csv,
             const std::string& rank_order_csv, double exponent, const std::string& out_path) {
  // Hypotheses per recording across all inputs, in argument order.
  std::vector<std::map<std::string, Timeline>> systems;
  for (const std::string& p : rttm_paths) systems.push_back(load_rttm_file(p));

  if (!weights_csv.empty() && !rank_order_csv.empty())
    throw ConfigError("--weights and --rank-order are mutually exclusive");

  FusionWeights weights = FusionWeights::rank_based(exponent);
  if (!weights_csv.empty()) {
    weights = FusionWeights::custom(parse_csv_numbers(weights_csv));
  } else if (!rank_order_csv.empty()) {
    // Explicit path-ordered ranks (1 = best) turned into reciprocal-rank
    // weights.
    std::vector<double> ranks = parse_csv_numbers(rank_order_csv);
    if (ranks.size() != rttm_paths.size())
      throw ConfigError("--rank-order needs one rank per hypothesis path");
    std::vector<double> w;
    for (double r : ranks) {
      if (r < 1.0) throw ConfigError("ranks start at 1");
      w.push_back(1.0 / std::pow(r, exponent));
    }
    weights = FusionWeights::custom(std::move(w));
  }

  std::set<std::string> recordings;
  for (const auto& sys : systems)
    for (const auto& [rec, tl] : sys) recordings.insert(rec);

  std::map<std::string, Timeline> out;
  for (const std::string& rec : recordings) {
    std::vector<Timeline> hyps;
    std::vector<double> active_weights;
    for (std::size_t i = 0; i < systems.size(); ++i) {
      auto it = systems[i].find(rec);
      if (it == systems[i].end()) {
        std::fprintf(stderr, "warning: recording '%s' missing from %s\n", rec.c_str(),
                     rttm_paths[i].c_str());
        continue;
      }
      hyps.push_back(it->second);
      if (weights.mode == FusionWeights::Mode::kCustom)
        active_weights.push_back(weights.custom_weights[i]);
    }
    if (hyps.empty()) continue;
    FusionWeights rec_weights = weights;
    if (weights.mode == FusionWeights::Mode::kCustom)
      rec_weights.custom_weights = active_weights;
    out.emplace(rec, hyps.size() == 1 ? hyps[0] : fuse(hyps, rec_weights));
  }
  write_rttm_file(out_path, out);
  return kExitOk;
}

// Grid search over the AHC operating thresholds against a reference — the
// tuning loop behind the stock defaults, pointed at the user's own data.
int cmd_sweep(const std::string& reference_path, const std::string& speech_dir,
              const SyntheticOpts& synth, const std::string& embedding_dir,
              const std::string& segment_grid, const std::string& stop_grid,
              const std::string& speaker_grid, const std::string& long_grid, double collar,
              bool no_overlap, std::optional<std::uint64_t> seed_override) {
  auto references = load_rttm_file(reference_path);
  if (references.empty()) throw ValidationError("reference RTTM contains no recordings");

  std::shared_ptr<const EmbeddingProvider> synthetic;
  if (embedding_dir.empty()) {
    SyntheticOpts opts = synth;
    if (opts.truth_rttm.empty()) opts.truth_rttm = reference_path;
    synthetic = opts.build(seed_override);
  }

  auto parse_grid = [](const std::string& csv, double fallback) {
    if (csv.empty()) return std::vector<double>{fallback};
    return parse_csv_numbers(csv);
  };
  AhcConfig defaults;
  std::vector<double> segments = parse_grid(segment_grid, defaults.segment_threshold);
  std::vector<double> stops = parse_grid(stop_grid, defaults.stop_threshold);
  std::vector<double> speakers = parse_grid(speaker_grid, defaults.speaker_threshold);
  std::vector<double> longs = parse_grid(long_grid, defaults.long_cluster_min_duration);

  double best_der = std::numeric_limits<double>::infinity();
  AhcConfig best;
  for (double seg : segments)
    for (double stop : stops)
      for (double spk : speakers)
        for (double long_dur : longs) {
          AhcConfig config = defaults;
          config.segment_threshold = seg;
          config.stop_threshold = stop;
          config.speaker_threshold = spk;
          config.long_cluster_min_duration = long_dur;

          double der_sum = 0.0, speech_sum = 0.0;
          for (const auto& [rec, ref] : references) {
            std::vector<Interval> speech;
            if (!speech_dir.empty())
              speech = load_speech_regions_file(speech_dir + "/" + rec + ".speech");
            else
              speech = speech_regions(ref);
            std::shared_ptr<const EmbeddingProvider> provider = synthetic;
            if (!embedding_dir.empty())
              provider = std::make_shared<FileEmbeddingProvider>(
                  FileEmbeddingProvider::from_file(rec, embedding_dir + "/" + rec + ".emb"));
            Timeline hyp = ahc_diarize(rec, speech, *provider, config);
            DiarizationScore s = score_der(hyp, ref, collar, !no_overlap);
            der_sum += s.der * s.total_reference_speech;
            speech_sum += s.total_reference_speech;
          }
          double der = speech_sum > 0.0 ? der_sum / speech_sum : 0.0;
          std::printf("segment=%.3f stop=%.3f speaker=%.3f long=%.2f  DER %.3f%%\n", seg,
                      stop, spk, long_dur, der);
          if (der < best_der) {
            best_der = der;
            best = config;
          }
        }
  std::printf("best: segment=%.3f stop=%.3f speaker=%.3f long=%.2f  DER %.3f%%\n",
              best.segment_threshold, best.stop_threshold, best.speaker_threshold,
              best.long_cluster_min_duration, best_der);
  return kExitOk;
}

int cmd_run(const std::string& config_path, std::size_t jobs, bool keep_intermediate,
            std::optional<std::uint64_t> seed) {
  std::ifstream in(config_path);
  if (!in) {
    std::fprintf(stderr, "config error: cannot open config: %s\n", config_path.c_str());
    return kExitConfigError;
  }
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  ConfigResult parsed = validate_config(text);
  if (!parsed.ok()) {
    for (const std::string& e : parsed.errors)
      std::fprintf(stderr, "config error: %s\n", e.c_str());
    return kExitConfigError;
  }

  RunOptions options;
  options.jobs = jobs;
  options.keep_intermediate = keep_intermediate;
  options.seed = seed;
  PipelineResult result = run_pipeline(parsed.config, options);

  for (const auto& [rec, score] : result.scores) print_score_line(stdout, rec, score);
  if (result.overall) print_score_line(stdout, "OVERALL", *result.overall);
  for (const auto& [rec, msg] : result.failures)
    std::fprintf(stderr, "error: %s: %s\n", rec.c_str(), msg.c_str());
  std::fprintf(stdout, "%zu recording(s) ok, %zu failed -> %s\n", result.outputs.size(),
               result.failures.size(), parsed.config.io.output.c_str());
  return result.all_ok() ? kExitOk : kExitRecordingFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diarkit: offline speaker-diarization pipeline toolkit"};
  app.require_subcommand(1);

  std::size_t jobs = 0;
  bool keep_intermediate = false;
  std::optional<std::uint64_t> seed;
  app.add_option("--jobs", jobs, "worker pool size (0 = logical CPUs)");
  app.add_flag("--keep-intermediate", keep_intermediate, "write per-stage RTTM snapshots");
  app.add_option("--seed", seed, "override provider seeds");

  // score
  auto* score = app.add_subcommand("score", "score hypothesis RTTM against a reference");
  std::string hyp_path, ref_path, kv_path;
  double collar = 0.25;
  bool no_overlap = false;
  score->add_option("hypothesis", hyp_path, "hypothesis RTTM")->required();
  score->add_option("reference", ref_path, "reference RTTM")->required();
  score->add_option("--collar", collar, "no-score collar in seconds")->capture_default_str();
  score->add_flag("--no-overlap", no_overlap, "exclude overlapped reference frames");
  score->add_option("--kv", kv_path, "machine-readable report path ('-' for stdout)");

  // vad
  auto* vad = app.add_subcommand("vad", "fuse VAD posteriors and emit speech regions");
  std::vector<std::string> vad_posteriors;
  double vad_threshold = 0.6, vad_min_speech = 0.0;
  std::string vad_out, vad_rttm, vad_recording;
  vad->add_option("posteriors", vad_posteriors, "posterior files (PST1)")
      ->required()
      ->expected(-1);
  vad->add_option("--threshold", vad_threshold, "speech decision threshold")
      ->capture_default_str();
  vad->add_option("--min-speech", vad_min_speech, "drop speech runs shorter than this")
      ->capture_default_str();
  vad->add_option("--out", vad_out, "speech-region list output")->required();
  vad->add_option("--rttm", vad_rttm, "optional RTTM with pseudo-speaker 'speech'");
  vad->add_option("--recording", vad_recording, "recording id for --rttm");

  // ahc / sc share options
  SyntheticOpts ahc_synth, sc_synth, tsvad_synth;
  std::string ahc_speech, ahc_embeddings, ahc_out, ahc_recording;
  AhcConfig ahc_config;
  auto* ahc = app.add_subcommand("ahc", "two-stage agglomerative clustering diarization");
  ahc->add_option("--speech", ahc_speech, "speech-region list file")->required();
  ahc->add_option("--embeddings", ahc_embeddings, "embedding file (EMB1)");
  ahc_synth.attach(ahc);
  ahc->add_option("--recording", ahc_recording, "recording id (default: speech file stem)");
  ahc->add_option("--out", ahc_out, "output RTTM")->required();
  ahc->add_option("--window", ahc_config.window)->capture_default_str();
  ahc->add_option("--shift", ahc_config.shift)->capture_default_str();
  ahc->add_option("--segment-threshold", ahc_config.segment_threshold)->capture_default_str();
  ahc->add_option("--stop-threshold", ahc_config.stop_threshold)->capture_default_str();
  ahc->add_option("--long-duration", ahc_config.long_cluster_min_duration)
      ->capture_default_str();
  ahc->add_option("--speaker-threshold", ahc_config.speaker_threshold)->capture_default_str();

  auto* sc = app.add_subcommand("sc", "spectral clustering diarization");
  std::string sc_speech, sc_embeddings, sc_out, sc_recording, sc_scorer = "stub-cosine";
  ScConfig sc_config;
  std::optional<std::size_t> sc_num_speakers;
  sc->add_option("--speech", sc_speech, "speech-region list file")->required();
  sc->add_option("--embeddings", sc_embeddings, "embedding file (EMB1)");
  sc_synth.attach(sc);
  sc->add_option("--recording", sc_recording, "recording id (default: speech file stem)");
  sc->add_option("--out", sc_out, "output RTTM")->required();
  sc->add_option("--window", sc_config.window)->capture_default_str();
  sc->add_option("--shift", sc_config.shift)->capture_default_str();
  sc->add_option("--block-size", sc_config.block_size)->capture_default_str();
  sc->add_option("--max-speakers", sc_config.max_speakers)->capture_default_str();
  sc->add_option("--num-speakers", sc_num_speakers, "pin the speaker count");
  sc->add_option("--scorer", sc_scorer, "stub-cosine or file:<affinity path>")
      ->capture_default_str();

  // overlap
  auto* overlap = app.add_subcommand("overlap", "overlap detection + two-closest relabeling");
  std::vector<std::string> ovl_posteriors;
  std::string ovl_diarization, ovl_out;
  double ovl_threshold = 0.8;
  overlap->add_option("posteriors", ovl_posteriors, "overlap posterior files")
      ->required()
      ->expected(-1);
  overlap->add_option("--diarization", ovl_diarization, "input diarization RTTM")->required();
  overlap->add_option("--threshold", ovl_threshold, "overlap decision threshold")
      ->capture_default_str();
  overlap->add_option("--out", ovl_out, "output RTTM")->required();

  // pair-refine
  auto* pair = app.add_subcommand("pair-refine", "2-speaker TS-VAD overlap refinement");
  std::string pair_diarization, pair_dir, pair_out;
  double pair_threshold = 0.8, pair_chunk = 16.0;
  std::size_t pair_top_k = 5;
  pair->add_option("--diarization", pair_diarization, "input diarization RTTM")->required();
  pair->add_option("--pair-dir", pair_dir, "directory of <rec>.<A>-<B>.pst files")
      ->required();
  pair->add_option("--threshold", pair_threshold)->capture_default_str();
  pair->add_option("--top-k", pair_top_k, "speakers entering pair enumeration")
      ->capture_default_str();
  pair->add_option("--chunk-length", pair_chunk)->capture_default_str();
  pair->add_option("--out", pair_out, "output RTTM")->required();

  // tsvad-refine
  auto* tsvad = app.add_subcommand("tsvad-refine", "TS-VAD re-decoding of a diarization");
  std::string tsvad_diarization, tsvad_scorer = "echo", tsvad_dir, tsvad_out;
  std::string tsvad_embeddings;
  TsvadConfig tsvad_config;
  tsvad->add_option("--diarization", tsvad_diarization, "input diarization RTTM")->required();
  tsvad->add_option("--scorer", tsvad_scorer, "echo or file")->capture_default_str();
  tsvad->add_option("--posterior-dir", tsvad_dir, "directory of <rec>.pst (file scorer)");
  tsvad->add_option("--embeddings", tsvad_embeddings, "embedding file (EMB1)");
  tsvad_synth.attach(tsvad);
  tsvad->add_option("--chunk-length", tsvad_config.chunk_length)->capture_default_str();
  tsvad->add_option("--max-targets", tsvad_config.max_targets)->capture_default_str();
  tsvad->add_option("--min-target-speech", tsvad_config.min_target_speech)
      ->capture_default_str();
  tsvad->add_option("--threshold", tsvad_config.decision_threshold)->capture_default_str();
  tsvad->add_option("--out", tsvad_out, "output RTTM")->required();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "build a mixture from labels + source WAVs");
  std::string sim_reference, sim_manifest, sim_wav, sim_rttm, sim_dir, sim_recording;
  int sim_rate = 16000;
  double sim_fps = 100.0;
  simulate->add_option("reference", sim_reference, "reference RTTM")->required();
  simulate->add_option("manifest", sim_manifest, "lines of '<speaker> <wav path>'")
      ->required();
  simulate->add_option("--sample-rate", sim_rate)->capture_default_str();
  simulate->add_option("--frame-rate", sim_fps)->capture_default_str();
  simulate->add_option("--out-wav", sim_wav, "mixture WAV output");
  simulate->add_option("--out-rttm", sim_rttm, "aligned RTTM output");
  simulate->add_option("--out-dir", sim_dir, "per-recording output directory");
  simulate->add_option("--recording", sim_recording, "simulate a single recording");

  // fuse
  auto* fuse_cmd = app.add_subcommand("fuse", "DOVER-Lap style hypothesis fusion");
  std::vector<std::string> fuse_paths;
  std::string fuse_weights, fuse_rank_order, fuse_out;
  double fuse_exponent = 1.0;
  fuse_cmd->add_option("hypotheses", fuse_paths, "RTTM paths in rank order (best first)")
      ->required()
      ->expected(-1);
  fuse_cmd->add_option("--weights", fuse_weights, "custom weights w1,w2,...");
  fuse_cmd->add_option("--rank-order", fuse_rank_order,
                       "explicit path-ordered ranks r1,r2,... (1 = best)");
  fuse_cmd->add_option("--rank-exponent", fuse_exponent, "rank weight exponent")
      ->capture_default_str();
  fuse_cmd->add_option("--out", fuse_out, "fused RTTM")->required();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "grid-search AHC thresholds against a reference");
  SyntheticOpts sweep_synth;
  std::string sweep_reference, sweep_speech_dir, sweep_embedding_dir;
  std::string sweep_segment, sweep_stop, sweep_speaker, sweep_long;
  double sweep_collar = 0.25;
  bool sweep_no_overlap = false;
  sweep->add_option("reference", sweep_reference, "reference RTTM")->required();
  sweep->add_option("--speech-dir", sweep_speech_dir,
                    "<rec>.speech region files (default: reference turns)");
  sweep->add_option("--embedding-dir", sweep_embedding_dir, "<rec>.emb files");
  sweep_synth.attach(sweep);
  sweep->add_option("--segment-thresholds", sweep_segment, "grid s1,s2,...");
  sweep->add_option("--stop-thresholds", sweep_stop, "grid s1,s2,...");
  sweep->add_option("--speaker-thresholds", sweep_speaker, "grid s1,s2,...");
  sweep->add_option("--long-durations", sweep_long, "grid d1,d2,...");
  sweep->add_option("--collar", sweep_collar)->capture_default_str();
  sweep->add_flag("--no-overlap", sweep_no_overlap);

  // run
  auto* run = app.add_subcommand("run", "execute a configured pipeline");
  std::string run_config;
  run->add_option("--config", run_config, "pipeline config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (*score) return cmd_score(hyp_path, ref_path, collar, no_overlap, kv_path);
    if (*vad)
      return cmd_vad(vad_posteriors, vad_threshold, vad_min_speech, vad_out, vad_rttm,
                     vad_recording);
    if (*ahc)
      return cmd_cluster(false, ahc_speech, ahc_embeddings, ahc_synth, ahc_recording, ahc_out,
                         ahc_config, ScConfig{}, std::nullopt, "stub-cosine", seed);
    if (*sc)
      return cmd_cluster(true, sc_speech, sc_embeddings, sc_synth, sc_recording, sc_out,
                         AhcConfig{}, sc_config, sc_num_speakers, sc_scorer, seed);
    if (*overlap) return cmd_overlap(ovl_posteriors, ovl_diarization, ovl_threshold, ovl_out);
    if (*pair)
      return cmd_pair_refine(pair_diarization, pair_dir, pair_threshold, pair_top_k,
                             pair_chunk, pair_out);
    if (*tsvad)
      return cmd_tsvad_refine(tsvad_diarization, tsvad_scorer, tsvad_dir, tsvad_synth,
                              tsvad_embeddings, tsvad_config, tsvad_out, seed);
    if (*simulate)
      return cmd_simulate(sim_reference, sim_manifest, sim_rate, sim_fps, sim_wav, sim_rttm,
                          sim_dir, sim_recording);
    if (*fuse_cmd)
      return cmd_fuse(fuse_paths, fuse_weights, fuse_rank_order, fuse_exponent, fuse_out);
    if (*sweep)
      return cmd_sweep(sweep_reference, sweep_speech_dir, sweep_synth, sweep_embedding_dir,
                       sweep_segment, sweep_stop, sweep_speaker, sweep_long, sweep_collar,
                       sweep_no_overlap, seed);
    if (*run) return cmd_run(run_config, jobs, keep_intermediate, seed);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRecordingFailure;
  }
  return kExitConfigError;
}
