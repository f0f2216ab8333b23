#include "ssebench/baseline.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "ssebench/error.hpp"

namespace ssebench {

PredictionSet simple_attack(const LeakageObservation& obs, const SimilarKnowledge& knowledge) {
  if (knowledge.size() == 0) throw Error("similar universe is empty");
  PredictionSet pred;
  pred.entries.resize(obs.size());
  const auto n = static_cast<std::ptrdiff_t>(obs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    double best_s = std::numeric_limits<double>::infinity();
    for (std::size_t w = 0; w < knowledge.size(); ++w) {
      const double s = std::abs(obs.volumes[i] - knowledge.volumes[w]) +
                       std::abs(obs.frequencies[i] - knowledge.frequencies[w]);
      if (s < best_s) {
        best_s = s;
        best = w;
      }
    }
    pred.entries[i] = {obs.tokens[i], best, std::nullopt};
  }
  return pred;
}

std::size_t distinctive_count(const LeakageObservation& obs, double alpha, double lambda) {
  const auto d = differential_distance(obs, alpha);
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
  if (!(mean > 0.0)) throw Error("mean differential distance is zero");
  std::size_t k = 0;
  for (double v : d) k += v / mean > lambda ? 1 : 0;
  return k;
}

}  // namespace ssebench
