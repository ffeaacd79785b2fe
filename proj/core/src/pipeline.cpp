#include "diar/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "diar/errors.hpp"
#include "diar/overlap.hpp"
#include "diar/providers.hpp"
#include "diar/vad.hpp"

namespace fs = std::filesystem;

namespace diar {

const char* stage_name(Stage stage) {
  switch (stage) {
    case Stage::kVad: return "vad";
    case Stage::kAhc: return "ahc";
    case Stage::kSc: return "sc";
    case Stage::kOverlap: return "overlap";
    case Stage::kPairRefine: return "pair-refine";
    case Stage::kTsvadRefine: return "tsvad-refine";
    case Stage::kFuse: return "fuse";
  }
  return "?";
}

std::optional<Stage> parse_stage(const std::string& name) {
  for (Stage s : {Stage::kVad, Stage::kAhc, Stage::kSc, Stage::kOverlap, Stage::kPairRefine,
                  Stage::kTsvadRefine, Stage::kFuse})
    if (name == stage_name(s)) return s;
  return std::nullopt;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : value) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

class ConfigParser {
 public:
  explicit ConfigParser(ConfigResult& result) : r_(result) {}

  void fail(int line, const std::string& msg) {
    r_.errors.push_back("line " + std::to_string(line) + ": " + msg);
  }

  bool number(int line, const std::string& key, const std::string& value, double& out) {
    try {
      std::size_t used = 0;
      out = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      return true;
    } catch (const std::exception&) {
      fail(line, "bad number for " + key + ": '" + value + "'");
      return false;
    }
  }

  bool count(int line, const std::string& key, const std::string& value, std::size_t& out) {
    try {
      long long v = std::stoll(value);
      if (v < 0) throw std::invalid_argument(value);
      out = static_cast<std::size_t>(v);
      return true;
    } catch (const std::exception&) {
      fail(line, "bad count for " + key + ": '" + value + "'");
      return false;
    }
  }

  ConfigResult& r_;
};

void check_stage_order(const std::vector<Stage>& stages, ConfigResult& r, int line) {
  auto err = [&](const std::string& msg) {
    r.errors.push_back("line " + std::to_string(line) + ": " + msg);
  };
  if (stages.empty()) {
    err("no stages configured");
    return;
  }
  bool seen_clustering = false, seen_fuse = false;
  std::size_t clustering_count = 0;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    Stage s = stages[i];
    if (seen_fuse) err("fuse must be the last stage");
    switch (s) {
      case Stage::kVad:
        if (i != 0) err("vad must run before everything else");
        break;
      case Stage::kAhc:
      case Stage::kSc:
        seen_clustering = true;
        ++clustering_count;
        break;
      case Stage::kOverlap:
      case Stage::kPairRefine:
      case Stage::kTsvadRefine:
        if (!seen_clustering)
          err(std::string(stage_name(s)) + " requires a clustering stage before it");
        break;
      case Stage::kFuse:
        if (clustering_count < 2) err("fuse needs at least two clustering hypotheses");
        seen_fuse = true;
        break;
    }
  }
  if (!seen_clustering) err("pipeline needs a clustering stage (ahc or sc)");
  if (clustering_count > 1 && !seen_fuse)
    err("multiple clustering stages require a final fuse stage");
}

}  // namespace

ConfigResult validate_config(const std::string& text) {
  ConfigResult result;
  ConfigParser p(result);
  PipelineConfig& c = result.config;

  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  int stages_line = 0;
  bool have_stages = false;

  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        p.fail(line_no, "unterminated section header");
        continue;
      }
      section = t.substr(1, t.size() - 2);
      const char* known[] = {"pipeline", "io", "provider", "vad", "ahc",
                             "sc",       "overlap", "pair", "tsvad", "fuse"};
      if (std::find(std::begin(known), std::end(known), section) == std::end(known))
        p.fail(line_no, "unknown section [" + section + "]");
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      p.fail(line_no, "expected key = value");
      continue;
    }
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    double num = 0.0;
    std::size_t cnt = 0;

    if (section == "pipeline") {
      if (key == "stages") {
        have_stages = true;
        stages_line = line_no;
        for (const std::string& name : split_list(value)) {
          auto s = parse_stage(name);
          if (!s) {
            p.fail(line_no, "unknown stage '" + name + "'");
            continue;
          }
          c.stages.push_back(*s);
        }
      } else {
        p.fail(line_no, "unknown key '" + key + "' in [pipeline]");
      }
    } else if (section == "io") {
      if (key == "reference") c.io.reference = value;
      else if (key == "speech_dir") c.io.speech_dir = value;
      else if (key == "output") c.io.output = value;
      else if (key == "report") c.io.report = value;
      else p.fail(line_no, "unknown key '" + key + "' in [io]");
    } else if (section == "provider") {
      if (key == "type") {
        if (value == "synthetic") c.provider.type = ProviderDecl::Type::kSynthetic;
        else if (value == "files") c.provider.type = ProviderDecl::Type::kFiles;
        else p.fail(line_no, "provider type must be synthetic or files");
      } else if (key == "truth") c.provider.truth = value;
      else if (key == "dimension") { if (p.count(line_no, key, value, cnt)) c.provider.dimension = cnt; }
      else if (key == "noise_scale") { if (p.number(line_no, key, value, num)) c.provider.noise_scale = num; }
      else if (key == "seed") { if (p.count(line_no, key, value, cnt)) c.provider.seed = cnt; }
      else if (key == "embedding_dir") c.provider.embedding_dir = value;
      else p.fail(line_no, "unknown key '" + key + "' in [provider]");
    } else if (section == "vad") {
      if (key == "threshold") { if (p.number(line_no, key, value, num)) c.vad.threshold = num; }
      else if (key == "min_speech") { if (p.number(line_no, key, value, num)) c.vad.min_speech = num; }
      else if (key == "posterior_dir") c.vad.posterior_dir = value;
      else p.fail(line_no, "unknown key '" + key + "' in [vad]");
    } else if (section == "ahc") {
      if (key == "window") { if (p.number(line_no, key, value, num)) c.ahc.window = num; }
      else if (key == "shift") { if (p.number(line_no, key, value, num)) c.ahc.shift = num; }
      else if (key == "segment_threshold") { if (p.number(line_no, key, value, num)) c.ahc.segment_threshold = num; }
      else if (key == "stop_threshold") { if (p.number(line_no, key, value, num)) c.ahc.stop_threshold = num; }
      else if (key == "long_cluster_min_duration") { if (p.number(line_no, key, value, num)) c.ahc.long_cluster_min_duration = num; }
      else if (key == "speaker_threshold") { if (p.number(line_no, key, value, num)) c.ahc.speaker_threshold = num; }
      else p.fail(line_no, "unknown key '" + key + "' in [ahc]");
    } else if (section == "sc") {
      if (key == "window") { if (p.number(line_no, key, value, num)) c.sc.config.window = num; }
      else if (key == "shift") { if (p.number(line_no, key, value, num)) c.sc.config.shift = num; }
      else if (key == "block_size") { if (p.count(line_no, key, value, cnt)) c.sc.config.block_size = cnt; }
      else if (key == "max_speakers") { if (p.count(line_no, key, value, cnt)) c.sc.config.max_speakers = cnt; }
      else if (key == "num_speakers") { if (p.count(line_no, key, value, cnt)) c.sc.num_speakers = cnt; }
      else p.fail(line_no, "unknown key '" + key + "' in [sc]");
    } else if (section == "overlap") {
      if (key == "threshold") { if (p.number(line_no, key, value, num)) c.overlap.threshold = num; }
      else if (key == "posterior_dir") c.overlap.posterior_dir = value;
      else p.fail(line_no, "unknown key '" + key + "' in [overlap]");
    } else if (section == "pair") {
      if (key == "threshold") { if (p.number(line_no, key, value, num)) c.pair.threshold = num; }
      else if (key == "top_k") { if (p.count(line_no, key, value, cnt)) c.pair.top_k = cnt; }
      else if (key == "chunk_length") { if (p.number(line_no, key, value, num)) c.pair.chunk_length = num; }
      else if (key == "posterior_dir") c.pair.posterior_dir = value;
      else p.fail(line_no, "unknown key '" + key + "' in [pair]");
    } else if (section == "tsvad") {
      if (key == "chunk_length") { if (p.number(line_no, key, value, num)) c.tsvad.config.chunk_length = num; }
      else if (key == "max_targets") { if (p.count(line_no, key, value, cnt)) c.tsvad.config.max_targets = cnt; }
      else if (key == "min_target_speech") { if (p.number(line_no, key, value, num)) c.tsvad.config.min_target_speech = num; }
      else if (key == "threshold") { if (p.number(line_no, key, value, num)) c.tsvad.config.decision_threshold = num; }
      else if (key == "frame_rate") { if (p.number(line_no, key, value, num)) c.tsvad.config.frame_rate = num; }
      else if (key == "scorer") {
        if (value == "echo") c.tsvad.scorer = TsvadStageParams::Scorer::kEcho;
        else if (value == "file") c.tsvad.scorer = TsvadStageParams::Scorer::kFile;
        else p.fail(line_no, "tsvad scorer must be echo or file");
      }
      else if (key == "posterior_dir") c.tsvad.posterior_dir = value;
      else p.fail(line_no, "unknown key '" + key + "' in [tsvad]");
    } else if (section == "fuse") {
      if (key == "mode") {
        if (value == "custom") c.fuse.weights.mode = FusionWeights::Mode::kCustom;
        else if (value == "rank") c.fuse.weights.mode = FusionWeights::Mode::kRankBased;
        else p.fail(line_no, "fuse mode must be custom or rank");
      } else if (key == "weights") {
        c.fuse.weights.custom_weights.clear();
        for (const std::string& w : split_list(value)) {
          double x = 0.0;
          if (p.number(line_no, "weights", w, x)) c.fuse.weights.custom_weights.push_back(x);
        }
      } else if (key == "exponent") {
        if (p.number(line_no, key, value, num)) c.fuse.weights.rank_exponent = num;
      } else {
        p.fail(line_no, "unknown key '" + key + "' in [fuse]");
      }
    } else if (section.empty()) {
      p.fail(line_no, "key outside any section");
    }
  }

  if (!have_stages) result.errors.push_back("line 0: no stages configured");
  else check_stage_order(result.config.stages, result, stages_line);
  return result;
}

std::vector<Interval> load_speech_regions_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open speech-region file: " + path);
  std::vector<Interval> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream row(t);
    Interval iv;
    if (!(row >> iv.onset >> iv.offset) || iv.offset <= iv.onset)
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected 'onset offset'");
    out.push_back(iv);
  }
  return merge_overlapping(std::move(out));
}

void write_speech_regions_file(const std::string& path, const std::vector<Interval>& regions) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write speech-region file: " + path);
  char buf[80];
  for (const Interval& iv : regions) {
    std::snprintf(buf, sizeof(buf), "%.3f %.3f\n", iv.onset, iv.offset);
    out << buf;
  }
}

std::vector<std::string> list_posterior_files(const std::string& dir,
                                              const std::string& recording_id) {
  std::vector<std::string> out;
  if (!fs::is_directory(dir)) return out;
  std::string prefix = recording_id + ".";
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    // Matches "<rec>.pst" as well as "<rec>.<anything>.pst".
    if (name.size() >= prefix.size() + 3 && name.rfind(prefix, 0) == 0 &&
        name.compare(name.size() - 4, 4, ".pst") == 0)
      out.push_back(entry.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct StageSnapshot {
  std::string stage;
  std::vector<Timeline> hypotheses;
};

struct RecordingRun {
  Timeline final;
  std::vector<StageSnapshot> snapshots;
};

// Builds a synthetic provider over the whole truth set: one deterministic
// unit centroid per speaker label.
std::shared_ptr<SyntheticProvider> make_synthetic_provider(
    const std::map<std::string, Timeline>& truth, const ProviderDecl& decl) {
  std::vector<std::string> labels;
  for (const auto& [rec, tl] : truth)
    for (const std::string& s : tl.speakers()) labels.push_back(s);
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  std::vector<SyntheticSpeakerModel> models;
  std::uint64_t salt = decl.seed;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    SyntheticSpeakerModel m;
    m.speaker_id = labels[i];
    m.seed = salt + i + 1;
    m.noise_scale = decl.noise_scale;
    m.centroid = random_unit_vector(decl.dimension, salt * 0x9e3779b9ULL + i);
    models.push_back(std::move(m));
  }
  return std::make_shared<SyntheticProvider>(truth, std::move(models));
}

RecordingRun run_recording(const std::string& rec, const PipelineConfig& config,
                           const std::map<std::string, Timeline>& reference,
                           const std::shared_ptr<SyntheticProvider>& synthetic,
                           bool keep_snapshots) {
  RecordingRun run;

  // Embedding provider for this recording.
  std::shared_ptr<const EmbeddingProvider> provider = synthetic;
  if (config.provider.type == ProviderDecl::Type::kFiles) {
    if (config.provider.embedding_dir.empty())
      throw ConfigError("provider type files requires embedding_dir");
    provider = std::make_shared<FileEmbeddingProvider>(FileEmbeddingProvider::from_file(
        rec, config.provider.embedding_dir + "/" + rec + ".emb"));
  }

  // Speech regions: vad stage > speech_dir > reference turns (oracle VAD).
  std::vector<Interval> speech;
  bool have_speech = false;
  bool vad_stage = !config.stages.empty() && config.stages.front() == Stage::kVad;
  if (!vad_stage) {
    if (!config.io.speech_dir.empty()) {
      speech = load_speech_regions_file(config.io.speech_dir + "/" + rec + ".speech");
      have_speech = true;
    } else if (auto it = reference.find(rec); it != reference.end()) {
      speech = speech_regions(it->second);
      have_speech = true;
    }
  }

  std::vector<Timeline> hypotheses;
  for (Stage stage : config.stages) {
    switch (stage) {
      case Stage::kVad: {
        std::vector<std::string> files = list_posterior_files(config.vad.posterior_dir, rec);
        if (files.empty())
          throw IoError("no VAD posterior files for recording '" + rec + "' in '" +
                        config.vad.posterior_dir + "'");
        std::vector<PosteriorTrack> tracks;
        for (const std::string& f : files) tracks.push_back(load_posterior_file(f));
        PosteriorTrack fused = fuse_tracks(tracks);
        speech = decide_speech(fused, config.vad.threshold, config.vad.min_speech)
                     .speech_intervals;
        have_speech = true;
        break;
      }
      case Stage::kAhc: {
        if (!have_speech) throw ConfigError("no speech regions available for '" + rec + "'");
        hypotheses.push_back(ahc_diarize(rec, speech, *provider, config.ahc));
        break;
      }
      case Stage::kSc: {
        if (!have_speech) throw ConfigError("no speech regions available for '" + rec + "'");
        CosineStubScorer scorer;
        hypotheses.push_back(spectral_diarize(rec, speech, *provider, scorer, config.sc.config,
                                              config.sc.num_speakers));
        break;
      }
      case Stage::kOverlap: {
        std::vector<std::string> files = list_posterior_files(config.overlap.posterior_dir, rec);
        if (files.empty())
          throw IoError("no overlap posterior files for recording '" + rec + "'");
        std::vector<PosteriorTrack> tracks;
        for (const std::string& f : files) tracks.push_back(load_posterior_file(f));
        std::vector<Interval> regions =
            detect_overlap_regions(fuse_tracks(tracks), config.overlap.threshold);
        for (Timeline& hyp : hypotheses) {
          std::vector<OverlapRegion> assigned;
          for (const Interval& region : regions)
            if (auto r = assign_two_closest_speakers(region, hyp)) assigned.push_back(*r);
          hyp = apply_overlap_regions(hyp, assigned);
        }
        break;
      }
      case Stage::kPairRefine: {
        FilePairScorer scorer(config.pair.posterior_dir);
        for (Timeline& hyp : hypotheses)
          hyp = pairwise_tsvad_overlap(hyp, scorer, config.pair.top_k, config.pair.threshold,
                                       config.pair.chunk_length);
        break;
      }
      case Stage::kTsvadRefine: {
        for (Timeline& hyp : hypotheses) {
          if (config.tsvad.scorer == TsvadStageParams::Scorer::kEcho) {
            EchoTsvadScorer scorer(hyp);
            hyp = tsvad_refine(hyp, *provider, scorer, config.tsvad.config);
          } else {
            FileTsvadScorer scorer(
                load_posterior_file(config.tsvad.posterior_dir + "/" + rec + ".pst"));
            hyp = tsvad_refine(hyp, *provider, scorer, config.tsvad.config);
          }
        }
        break;
      }
      case Stage::kFuse: {
        Timeline fused = fuse(hypotheses, config.fuse.weights);
        hypotheses.clear();
        hypotheses.push_back(std::move(fused));
        break;
      }
    }
    if (keep_snapshots) {
      StageSnapshot snap;
      snap.stage = stage_name(stage);
      snap.hypotheses = hypotheses;
      run.snapshots.push_back(std::move(snap));
    }
  }

  if (hypotheses.empty()) throw ConfigError("pipeline produced no hypothesis");
  run.final = std::move(hypotheses.back());
  return run;
}

std::string format_kv(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config, const RunOptions& options) {
  {
    // The config may come from code rather than validate_config; re-check.
    ConfigResult check;
    check.config = config;
    check_stage_order(config.stages, check, 0);
    if (!check.ok()) throw ConfigError("invalid stage list: " + check.errors.front());
  }
  if (config.io.output.empty()) throw ConfigError("io.output is required");

  std::map<std::string, Timeline> reference;
  if (!config.io.reference.empty()) reference = load_rttm_file(config.io.reference);

  // Synthetic truth defaults to the scoring reference.
  std::map<std::string, Timeline> truth = reference;
  if (!config.provider.truth.empty()) truth = load_rttm_file(config.provider.truth);

  std::shared_ptr<SyntheticProvider> synthetic;
  if (config.provider.type == ProviderDecl::Type::kSynthetic) {
    if (truth.empty())
      throw ConfigError("synthetic provider needs provider.truth or io.reference");
    ProviderDecl decl = config.provider;
    if (options.seed) decl.seed = *options.seed;
    synthetic = make_synthetic_provider(truth, decl);
  }

  // Recordings come from the reference, falling back to synthetic truth.
  std::vector<std::string> recordings;
  for (const auto& [rec, tl] : (reference.empty() ? truth : reference))
    recordings.push_back(rec);
  if (recordings.empty())
    throw ConfigError("cannot enumerate recordings: no reference or synthetic truth");

  PipelineResult result;
  std::map<std::string, RecordingRun> runs;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::size_t jobs = options.jobs ? options.jobs
                                  : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, recordings.size());

  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= recordings.size()) break;
      const std::string& rec = recordings[i];
      try {
        RecordingRun run =
            run_recording(rec, config, reference, synthetic, options.keep_intermediate);
        std::lock_guard<std::mutex> lock(mu);
        runs.emplace(rec, std::move(run));
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mu);
        result.failures.emplace(rec, e.what());
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  for (auto& [rec, run] : runs) result.outputs.emplace(rec, run.final);

  // Final RTTM.
  if (auto dir = fs::path(config.io.output).parent_path(); !dir.empty())
    fs::create_directories(dir);
  write_rttm_file(config.io.output, result.outputs);

  if (options.keep_intermediate) {
    fs::path dir = fs::path(config.io.output).parent_path() / "intermediate";
    fs::create_directories(dir);
    for (const auto& [rec, run] : runs) {
      for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
        const StageSnapshot& snap = run.snapshots[i];
        for (std::size_t h = 0; h < snap.hypotheses.size(); ++h) {
          char name[128];
          std::snprintf(name, sizeof(name), "%02zu_%s.h%zu.rttm", i, snap.stage.c_str(), h);
          std::map<std::string, Timeline> one{{rec, snap.hypotheses[h]}};
          std::ofstream out(dir / name, std::ios::app);
          out << serialize_rttm(one);
        }
      }
    }
  }

  // Scoring report when a reference is available.
  std::string kv;
  if (!reference.empty()) {
    double speech_sum = 0.0, der_sum = 0.0, miss_sum = 0.0, fa_sum = 0.0, conf_sum = 0.0;
    double jer_weighted = 0.0, jer_weight = 0.0;
    for (const auto& [rec, hyp] : result.outputs) {
      auto ref = reference.find(rec);
      if (ref == reference.end()) continue;
      DiarizationScore s = score_der(hyp, ref->second);
      result.scores.emplace(rec, s);
      kv += rec + ".der=" + format_kv(s.der) + "\n";
      kv += rec + ".jer=" + format_kv(s.jer) + "\n";
      kv += rec + ".miss=" + format_kv(s.miss) + "\n";
      kv += rec + ".false_alarm=" + format_kv(s.false_alarm) + "\n";
      kv += rec + ".confusion=" + format_kv(s.confusion) + "\n";
      kv += rec + ".ref_speech=" + format_kv(s.total_reference_speech) + "\n";
      speech_sum += s.total_reference_speech;
      der_sum += s.der * s.total_reference_speech;
      miss_sum += s.miss * s.total_reference_speech;
      fa_sum += s.false_alarm * s.total_reference_speech;
      conf_sum += s.confusion * s.total_reference_speech;
      double nspk = static_cast<double>(ref->second.speakers().size());
      jer_weighted += s.jer * nspk;
      jer_weight += nspk;
    }
    if (speech_sum > 0.0) {
      DiarizationScore overall;
      overall.der = der_sum / speech_sum;
      overall.miss = miss_sum / speech_sum;
      overall.false_alarm = fa_sum / speech_sum;
      overall.confusion = conf_sum / speech_sum;
      overall.total_reference_speech = speech_sum;
      overall.jer = jer_weight > 0.0 ? jer_weighted / jer_weight : 0.0;
      result.overall = overall;
      kv += "overall.der=" + format_kv(overall.der) + "\n";
      kv += "overall.jer=" + format_kv(overall.jer) + "\n";
      kv += "overall.miss=" + format_kv(overall.miss) + "\n";
      kv += "overall.false_alarm=" + format_kv(overall.false_alarm) + "\n";
      kv += "overall.confusion=" + format_kv(overall.confusion) + "\n";
    }
  }
  for (const auto& [rec, tl] : result.outputs) kv += "status." + rec + "=ok\n";
  for (const auto& [rec, msg] : result.failures) kv += "status." + rec + "=failed\n";
  result.report_text = kv;
  if (!config.io.report.empty()) {
    std::ofstream out(config.io.report);
    if (!out) throw IoError("cannot write report: " + config.io.report);
    out << kv;
  }
  return result;
}

}  // namespace diar
