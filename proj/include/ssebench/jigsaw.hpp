#pragma once

// Query recovery from volume, frequency and co-occurrence leakage in three
// stages: match the most isolated queries on (volume, frequency), keep the
// matches whose co-occurrence rows agree best, then grow the matching
// iteratively by co-occurrence with everything recovered so far.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ssebench/kernels.hpp"
#include "ssebench/knowledge.hpp"
#include "ssebench/leakage.hpp"

namespace ssebench {

/// Number of predictions committed per iteration of the final stage:
/// ceil(initial * growth^iteration), at least 1. growth == 1 is a constant speed.
struct RefSpeed {
  double initial = 10.0;
  double growth = 1.0;

  std::size_t at(std::size_t iteration) const;
  bool operator==(const RefSpeed&) const = default;
};

struct AttackParams {
  double alpha = 0.3;  ///< volume weight in the (volume, frequency) distance
  double beta = 0.9;   ///< co-occurrence weight in the final-stage score
  std::size_t base_rec = 45;
  std::size_t conf_rec = 35;
  RefSpeed ref_speed{};
  double epsilon = 1e-10;  ///< floor of the logarithm argument

  bool operator==(const AttackParams&) const = default;
};

inline constexpr double kForcedCertainty = std::numeric_limits<double>::infinity();

struct Prediction {
  QueryToken token;
  std::size_t keyword = 0;  ///< row of the similar-data universe
  std::optional<double> certainty;

  bool operator==(const Prediction&) const = default;
};

struct PredictionSet {
  std::vector<Prediction> entries;

  std::size_t size() const noexcept { return entries.size(); }
  bool empty() const noexcept { return entries.empty(); }
  bool operator==(const PredictionSet&) const = default;
};

/// alpha*|dv| + (1-alpha)*|df|.
inline double vf_distance(double alpha, double v1, double f1, double v2, double f2) {
  return alpha * (v1 > v2 ? v1 - v2 : v2 - v1) + (1.0 - alpha) * (f1 > f2 ? f1 - f2 : f2 - f1);
}

/// Distance from each query to its nearest other query in (volume, frequency).
std::vector<double> differential_distance(const LeakageObservation& obs, double alpha);

/// Matches the base_rec most isolated queries to their nearest keyword.
/// Keywords may repeat across predictions.
PredictionSet recover_dq(const LeakageObservation& obs, const SimilarKnowledge& knowledge, double alpha,
                         std::size_t base_rec);

/// Euclidean distance between the row-normalized co-occurrence rows of each
/// prediction's query and keyword, restricted to the predicted set.
std::vector<double> verification_distances(const PredictionSet& pred, const LeakageObservation& obs,
                                           const SimilarKnowledge& knowledge);

/// Drops the |pred| - conf_rec predictions with the largest verification distance.
PredictionSet verify(const PredictionSet& pred, const LeakageObservation& obs, const SimilarKnowledge& knowledge,
                     std::size_t conf_rec);

struct RecoveryStats {
  std::size_t iterations = 0;
  std::vector<std::size_t> unknown_before;  ///< unknown-query count at the start of each iteration
};

/// Chooses `count` commits from per-query candidate lists (best first).
/// Queries are taken in decreasing certainty; a query whose best keyword was
/// already claimed this round is deferred and, if still needed, gets its
/// best unclaimed candidate. Returns (query position, candidate position) pairs.
std::vector<std::pair<std::size_t, std::size_t>> select_commits(const kernels::CandidateLists& candidates,
                                                                std::size_t count);

/// Certainty of each candidate: its score minus the best score of any other
/// candidate. A lone candidate gets +inf.
std::vector<double> certainties(std::span<const double> scores);

/// Certainty of a candidate list: best minus runner-up, +inf when only one candidate exists.
double certainty_of(const std::vector<kernels::Candidate>& candidates);

PredictionSet recover_all(const PredictionSet& seed, const LeakageObservation& obs, const SimilarKnowledge& knowledge,
                          const AttackParams& params, RecoveryStats* stats = nullptr,
                          kernels::Backend backend = kernels::Backend::openmp);

/// Full three-stage pipeline.
PredictionSet jigsaw_attack(const LeakageObservation& obs, const SimilarKnowledge& knowledge,
                            const AttackParams& params, kernels::Backend backend = kernels::Backend::openmp);

}  // namespace ssebench
