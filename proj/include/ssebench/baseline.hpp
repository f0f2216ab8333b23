#pragma once

#include <cstddef>

#include "ssebench/jigsaw.hpp"

namespace ssebench {

/// Pairs every observed query with the keyword minimizing |dv| + |df|
/// (keywords may repeat, ties go to the lower keyword row).
PredictionSet simple_attack(const LeakageObservation& obs, const SimilarKnowledge& knowledge);

/// Number of queries whose differential distance exceeds lambda times the mean.
std::size_t distinctive_count(const LeakageObservation& obs, double alpha, double lambda);

}  // namespace ssebench
