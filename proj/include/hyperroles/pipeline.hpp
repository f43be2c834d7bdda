#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hyperroles/centrality.hpp"
#include "hyperroles/error.hpp"
#include "hyperroles/ingest.hpp"
#include "hyperroles/lexicon.hpp"

namespace hyperroles {

struct CentralityConfig {
  std::size_t k = 50;
  std::size_t s = 1;
  std::size_t max_incidence = 0;
  std::size_t pivots = 0;  // 0: exact
};

struct NullModelConfig {
  std::size_t n_shuffles = 500;
  std::uint64_t seed = 0;
  double alpha = 0.01;
};

struct LexiconSource {
  LexiconFamily family = LexiconFamily::kEmotion;
  std::filesystem::path path;
};

/// Everything a run depends on besides the input files themselves. Relative
/// paths in a config file are resolved against the file's directory.
struct PipelineConfig {
  std::filesystem::path threads;
  std::filesystem::path users;
  std::optional<std::filesystem::path> texts;
  std::optional<std::string> community;
  std::optional<int> year;
  std::vector<int> months;
  std::size_t min_edge_size = 3;
  std::optional<std::filesystem::path> catalog;  // default: the standard eight
  std::vector<std::pair<std::string, double>> thresholds;  // empty: 0.5 each
  std::vector<std::string> omegas;
  CentralityConfig centrality;
  NullModelConfig null_model;
  std::vector<LexiconSource> lexicons;
  TextScoring text_scoring = TextScoring::kRawSum;
  std::size_t top_k_typical = 10;
  ColumnMap columns;
  WordCountAverage word_count_average = WordCountAverage::kTexts;
  std::size_t threads_hint = 0;  // worker threads, 0: hardware concurrency

  PipelineConfig();
  /// Throws kInputError on unknown keys or ill-typed values.
  static PipelineConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static PipelineConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

enum class Stage {
  kIngest,
  kStats,
  kDistributions,
  kArchetypes,
  kProfiles,
  kTransitions,
  kCentrality,
  kCharacterize,
};

std::string_view to_string(Stage stage) noexcept;
std::vector<Stage> all_stages();

/// Failure inside a named stage; keeps the code of the underlying error.
class StageError : public Error {
 public:
  StageError(std::string stage, ErrorCode code, const std::string& cause)
      : Error(code, "stage '" + stage + "' failed: " + cause), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct RunOptions {
  bool timestamp = true;  // record wall-clock time in run_metadata.json
};

struct RunResult {
  std::vector<std::string> outputs;  // file names written, in order
  nlohmann::json metadata;
  std::vector<std::string> warnings;
};

/// Runs the requested stages (plus whatever they depend on) and writes their
/// outputs and run_metadata.json into out_dir.
RunResult run_pipeline(const PipelineConfig& config, const std::filesystem::path& out_dir,
                       std::span<const Stage> stages, const RunOptions& options = {});

/// SHA-256 of a file's bytes, lower-case hex.
std::string content_hash(const std::filesystem::path& path);

}  // namespace hyperroles
