#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diar/ahc.hpp"
#include "diar/fusion.hpp"
#include "diar/metrics.hpp"
#include "diar/spectral.hpp"
#include "diar/timeline.hpp"
#include "diar/tsvad.hpp"

namespace diar {

enum class Stage { kVad, kAhc, kSc, kOverlap, kPairRefine, kTsvadRefine, kFuse };

const char* stage_name(Stage stage);
std::optional<Stage> parse_stage(const std::string& name);

struct PipelineIo {
  std::string reference;   // RTTM; doubles as synthetic truth and oracle VAD
  std::string speech_dir;  // <rec>.speech region files
  std::string output;      // final RTTM path
  std::string report;      // optional key=value score report path
};

struct ProviderDecl {
  enum class Type { kSynthetic, kFiles };
  Type type = Type::kSynthetic;
  std::string truth;  // synthetic ground truth RTTM; defaults to io.reference
  std::size_t dimension = 128;
  double noise_scale = 0.0;
  std::uint64_t seed = 1;
  std::string embedding_dir;  // files mode: <rec>.emb
};

struct VadStageParams {
  double threshold = 0.6;
  double min_speech = 0.0;  // smoothing knob, off by default
  std::string posterior_dir;
};

struct ScStageParams {
  ScConfig config;
  std::optional<std::size_t> num_speakers;
};

struct OverlapStageParams {
  double threshold = 0.8;
  std::string posterior_dir;
};

struct PairStageParams {
  double threshold = 0.8;
  std::size_t top_k = 5;
  double chunk_length = 16.0;
  std::string posterior_dir;
};

struct TsvadStageParams {
  enum class Scorer { kEcho, kFile };
  TsvadConfig config;
  Scorer scorer = Scorer::kEcho;
  std::string posterior_dir;  // file mode: <rec>.pst over concatenated speech
};

struct FuseStageParams {
  FusionWeights weights;  // defaults to rank-based, exponent 1
};

struct PipelineConfig {
  std::vector<Stage> stages;
  PipelineIo io;
  ProviderDecl provider;
  VadStageParams vad;
  AhcConfig ahc;
  ScStageParams sc;
  OverlapStageParams overlap;
  PairStageParams pair;
  TsvadStageParams tsvad;
  FuseStageParams fuse;
};

// Parse + validate a sectioned key-value config. Unknown keys are rejected;
// stage ordering must respect dependencies (vad first, clustering before
// refinement, fuse last). All errors are collected with line numbers.
struct ConfigResult {
  PipelineConfig config;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

ConfigResult validate_config(const std::string& text);

struct RunOptions {
  std::size_t jobs = 0;  // 0 = hardware concurrency
  bool keep_intermediate = false;
  std::optional<std::uint64_t> seed;  // overrides provider seed
};

struct PipelineResult {
  std::map<std::string, Timeline> outputs;
  std::map<std::string, std::string> failures;  // recording -> error message
  std::map<std::string, DiarizationScore> scores;
  std::optional<DiarizationScore> overall;
  std::string report_text;  // key=value lines

  bool all_ok() const { return failures.empty(); }
};

// Executes the configured stages per recording on a bounded worker pool.
// A failure in one recording never affects another; failed recordings are
// reported in the result. Setup-level problems throw ConfigError.
PipelineResult run_pipeline(const PipelineConfig& config, const RunOptions& options = {});

// Speech-region list files: one "onset offset" pair per line.
std::vector<Interval> load_speech_regions_file(const std::string& path);
void write_speech_regions_file(const std::string& path, const std::vector<Interval>& regions);

// Sorted posterior files named "<recording>.*.pst" inside dir.
std::vector<std::string> list_posterior_files(const std::string& dir,
                                              const std::string& recording_id);

}  // namespace diar
