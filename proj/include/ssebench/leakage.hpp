#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "ssebench/corpus.hpp"
#include "ssebench/matrix.hpp"

namespace ssebench {

/// Per-interval (week, month, ...) keyword popularity counts.
struct FrequencySeries {
  KeywordUniverse universe;
  /// intervals[t][i] = count of keyword i during interval t.
  std::vector<std::vector<double>> intervals;

  std::size_t interval_count() const noexcept { return intervals.size(); }
};

/// Normalized keyword popularity; sums to 1.
struct FrequencyVector {
  std::vector<double> probabilities;

  std::size_t size() const noexcept { return probabilities.size(); }
  double operator[](std::size_t i) const { return probabilities[i]; }
  bool operator==(const FrequencyVector&) const = default;
};

/// Ground-truth keyword rows of the user's queries, in issue order.
struct QueryTrace {
  std::vector<std::size_t> queries;

  std::size_t size() const noexcept { return queries.size(); }
  bool operator==(const QueryTrace&) const = default;
};

/// Opaque search token. Tokens are issued 0, 1, 2, ... in order of first appearance.
struct QueryToken {
  std::uint32_t value = 0;
  auto operator<=>(const QueryToken&) const = default;
};

/// Everything the adversary sees: distinct tokens with their volume,
/// frequency and pairwise co-occurrence.
struct LeakageObservation {
  std::vector<QueryToken> tokens;  ///< Td_r; tokens[i].value == i
  std::vector<double> volumes;     ///< |D(td)| / |D|
  std::vector<double> frequencies; ///< Count(td) / |trace|
  Matrix cooccurrence;             ///< ID_r ID_r^T / |D|
  std::size_t n_docs = 0;
  std::size_t trace_length = 0;

  std::size_t size() const noexcept { return tokens.size(); }
};

/// Hidden mapping token -> real keyword row; only for evaluation.
struct GroundTruth {
  std::vector<std::size_t> keyword_of_token;
  std::vector<std::size_t> trace_counts;  ///< occurrences of each token in the trace
};

struct Observation {
  LeakageObservation leakage;
  GroundTruth truth;
};

/// CSV with header `keyword,interval,count`. Missing cells are zero; the
/// number of intervals is max(interval) + 1 unless `min_intervals` is larger.
/// Rows naming a keyword outside the universe are an error unless `skip_unknown`.
FrequencySeries load_frequency_table(const std::filesystem::path& path, const KeywordUniverse& universe,
                                     std::size_t min_intervals = 0, bool skip_unknown = false);
void save_frequency_table(const FrequencySeries& series, const std::filesystem::path& path);

/// Sum over [start, start + length), normalized to 1.
FrequencyVector window_frequency(const FrequencySeries& series, std::size_t start, std::size_t length);

struct SyntheticFrequencyParams {
  std::size_t n_intervals = 100;
  double zipf_exponent = 1.0;
  /// Std-dev of the per-interval Gaussian step of each keyword's log-popularity.
  double drift = 0.0;
  std::uint64_t seed = 0;
};

/// Zipfian popularity over a seeded random permutation of the universe,
/// evolving as an independent log-space random walk per keyword.
FrequencySeries generate_frequency_series(const KeywordUniverse& universe, const SyntheticFrequencyParams& params);

/// eta * n_intervals i.i.d. draws from `freq`.
QueryTrace generate_trace(const FrequencyVector& freq, std::size_t eta, std::size_t n_intervals, std::uint64_t seed);

Observation observe(const BinaryIndex& index, const QueryTrace& trace);

}  // namespace ssebench
