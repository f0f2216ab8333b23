#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ssebench/config.hpp"
#include "ssebench/countermeasure.hpp"
#include "ssebench/metrics.hpp"

namespace ssebench {

struct TrialResult {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::optional<MetricsReport> metrics;  ///< absent when the trial failed
  OverheadReport overhead;
  double seconds = 0.0;  ///< 0 unless record_wall_clock is set
  std::size_t observed_queries = 0;
  std::optional<std::string> error;

  bool ok() const noexcept { return !error.has_value(); }
};

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  ///< sample standard deviation; 0 for fewer than two values
};

struct AggregateReport {
  std::size_t succeeded = 0;
  Summary accuracy;
  Summary recovery_rate;
  Summary accuracy_unique;
  Summary correct_distinct;
  Summary storage_overhead;
  Summary communication_overhead;
};

struct RunReport {
  ExperimentConfig config;
  std::optional<std::string> setup_error;  ///< inputs could not be prepared; no trial ran
  std::vector<TrialResult> trials;
  AggregateReport aggregate;

  bool ok() const noexcept;
};

Summary summarize(const std::vector<double>& values);

RunReport run_experiment(const ExperimentConfig& config);

/// Writes report.json, metrics.csv and (with quadrants enabled) quadrants.csv,
/// each through a temporary file renamed into place.
void emit_reports(const RunReport& report, const std::filesystem::path& dir);

nlohmann::json report_to_json(const RunReport& report);
std::string metrics_csv(const RunReport& report);
std::string quadrants_csv(const RunReport& report);

struct DurabilityPoint {
  std::size_t tau = 0;
  RunReport report;
};

/// One run per offset; attacker window fixed, user window shifted by tau.
/// Each offset gets master seed derive_seed(master, tau).
std::vector<DurabilityPoint> durability_sweep(const ExperimentConfig& config, const std::vector<std::size_t>& taus);

/// Replaces the value at a dotted key (e.g. "defense.k") of the config's JSON form.
ExperimentConfig with_override(const ExperimentConfig& config, const std::string& dotted_key, const std::string& value);

}  // namespace ssebench
