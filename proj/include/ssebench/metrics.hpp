#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include "ssebench/jigsaw.hpp"
#include "ssebench/leakage.hpp"

namespace ssebench {

enum class Quadrant { hvhf = 0, hvlf = 1, lvhf = 2, lvlf = 3 };
inline constexpr std::array<Quadrant, 4> kQuadrants{Quadrant::hvhf, Quadrant::hvlf, Quadrant::lvhf, Quadrant::lvlf};
std::string_view to_string(Quadrant q);

struct QuadrantStats {
  std::size_t count = 0;      ///< distinct queries in the quadrant
  std::size_t predicted = 0;  ///< of which carry a prediction
  std::size_t correct = 0;
  /// correct / predicted; absent when nothing in the quadrant was predicted.
  std::optional<double> accuracy;
};

using QuadrantReport = std::array<QuadrantStats, 4>;

struct MetricsReport {
  double accuracy = 0.0;       ///< trace-weighted
  double recovery_rate = 0.0;  ///< trace-weighted
  std::size_t correct_distinct = 0;
  std::size_t predicted_distinct = 0;
  double accuracy_unique = 0.0;
  std::optional<QuadrantReport> per_quadrant;
};

/// Predictions name rows of the similar universe; they are compared with the
/// true rows of the real universe, so both must be the same universe.
MetricsReport score_predictions(const PredictionSet& pred, const LeakageObservation& obs, const GroundTruth& truth);

/// High volume = top ceil(rv * l) queries by volume, high frequency = top
/// ceil(rf * l) by frequency (ties to the lower token).
QuadrantReport quadrant_accuracy(const PredictionSet& pred, const LeakageObservation& obs, const GroundTruth& truth,
                                 double rv, double rf);

}  // namespace ssebench
