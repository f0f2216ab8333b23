#include "ssebench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "ssebench/error.hpp"

namespace ssebench {

namespace {

std::vector<bool> top_fraction(const std::vector<double>& values, double fraction) {
  const std::size_t l = values.size();
  const auto take = std::min(l, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(l) - 1e-9)));
  std::vector<std::size_t> order(l);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<bool> high(l, false);
  for (std::size_t i = 0; i < take; ++i) high[order[i]] = true;
  return high;
}

void check_tokens(const PredictionSet& pred, const LeakageObservation& obs, const GroundTruth& truth) {
  if (truth.keyword_of_token.size() != obs.size()) throw Error("ground truth does not match the observation");
  std::vector<bool> seen(obs.size(), false);
  for (const auto& p : pred.entries) {
    if (p.token.value >= obs.size()) throw Error("prediction for unobserved token " + std::to_string(p.token.value));
    if (seen[p.token.value]) throw Error("token " + std::to_string(p.token.value) + " predicted twice");
    seen[p.token.value] = true;
  }
}

}  // namespace

std::string_view to_string(Quadrant q) {
  switch (q) {
    case Quadrant::hvhf: return "HVHF";
    case Quadrant::hvlf: return "HVLF";
    case Quadrant::lvhf: return "LVHF";
    case Quadrant::lvlf: return "LVLF";
  }
  return "?";
}

MetricsReport score_predictions(const PredictionSet& pred, const LeakageObservation& obs, const GroundTruth& truth) {
  check_tokens(pred, obs, truth);
  if (pred.empty()) throw Error("no queries were recovered");
  std::size_t recovered = 0;
  std::size_t correct = 0;
  MetricsReport report;
  for (const auto& p : pred.entries) {
    const std::size_t occurrences = truth.trace_counts[p.token.value];
    recovered += occurrences;
    if (truth.keyword_of_token[p.token.value] == p.keyword) {
      correct += occurrences;
      ++report.correct_distinct;
    }
  }
  const std::size_t total = std::accumulate(truth.trace_counts.begin(), truth.trace_counts.end(), std::size_t{0});
  report.predicted_distinct = pred.size();
  report.recovery_rate = static_cast<double>(recovered) / static_cast<double>(total);
  report.accuracy = static_cast<double>(correct) / static_cast<double>(recovered);
  report.accuracy_unique = static_cast<double>(report.correct_distinct) / static_cast<double>(pred.size());
  return report;
}

QuadrantReport quadrant_accuracy(const PredictionSet& pred, const LeakageObservation& obs, const GroundTruth& truth,
                                 double rv, double rf) {
  if (!(rv > 0.0 && rv < 1.0 && rf > 0.0 && rf < 1.0)) throw Error("rv and rf must lie in (0, 1)");
  check_tokens(pred, obs, truth);
  const auto high_volume = top_fraction(obs.volumes, rv);
  const auto high_frequency = top_fraction(obs.frequencies, rf);
  auto quadrant_of = [&](std::size_t t) {
    const std::size_t q = (high_volume[t] ? 0 : 2) + (high_frequency[t] ? 0 : 1);
    return q;
  };

  QuadrantReport report{};
  for (std::size_t t = 0; t < obs.size(); ++t) ++report[quadrant_of(t)].count;
  for (const auto& p : pred.entries) {
    auto& stats = report[quadrant_of(p.token.value)];
    ++stats.predicted;
    if (truth.keyword_of_token[p.token.value] == p.keyword) ++stats.correct;
  }
  for (auto& stats : report) {
    if (stats.predicted > 0) stats.accuracy = static_cast<double>(stats.correct) / static_cast<double>(stats.predicted);
  }
  return report;
}

}  // namespace ssebench
