#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "ssebench/corpus.hpp"
#include "ssebench/countermeasure.hpp"
#include "ssebench/jigsaw.hpp"
#include "ssebench/leakage.hpp"

namespace ssebench {

enum class CorpusSourceKind { synthetic, jsonl, text_dir };
enum class SplitMode { split, identical };
enum class FrequencySourceKind { synthetic, table };
/// recover_dq runs only the first stage; recover_dq_verify the first two.
enum class AttackKind { jigsaw, simple, recover_dq, recover_dq_verify };

struct CorpusSource {
  CorpusSourceKind kind = CorpusSourceKind::synthetic;
  std::filesystem::path path;            // jsonl / text_dir
  std::optional<std::filesystem::path> stopwords;  // text_dir tokenization
  ZipfCorpusParams zipf;                 // synthetic

  /// Compares only the fields the active kind reads.
  bool operator==(const CorpusSource& o) const;
};

struct FrequencySource {
  FrequencySourceKind kind = FrequencySourceKind::synthetic;
  std::filesystem::path path;       // table
  bool skip_unknown = false;        // table rows outside the universe are dropped
  SyntheticFrequencyParams synthetic;

  bool operator==(const FrequencySource& o) const;
};

struct ExperimentConfig {
  CorpusSource corpus;
  std::size_t universe_size = 200;
  std::optional<std::filesystem::path> stopwords;  ///< excluded from the universe
  SplitMode split_mode = SplitMode::split;
  double split_fraction = 0.5;
  FrequencySource frequency;
  std::size_t window_start = 0;
  std::size_t window_length = 50;
  std::size_t tau = 0;
  std::size_t eta = 100;
  std::size_t n_intervals = 50;
  DefenseConfig defense;
  bool adaptation = false;
  AttackKind attack = AttackKind::jigsaw;
  AttackParams params;
  bool quadrants = false;
  double rv = 0.1;
  double rf = 0.1;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
  std::filesystem::path output_dir = "out";
  bool record_wall_clock = false;

  bool operator==(const ExperimentConfig&) const = default;
};

std::string to_string(AttackKind kind);

nlohmann::json config_to_json(const ExperimentConfig& config);
/// Strict: unknown keys and missing seeds are errors.
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Parses a config file; relative paths inside it are resolved against the file's directory.
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json load_config_json(const std::filesystem::path& path);
ExperimentConfig resolve_paths(ExperimentConfig config, const std::filesystem::path& base_dir);

/// Checks internal consistency that does not need the input data.
void validate_config(const ExperimentConfig& config);

}  // namespace ssebench
