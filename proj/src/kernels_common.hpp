#pragma once

#include <algorithm>
#include <bit>
#include <vector>

#include "ssebench/kernels.hpp"

namespace ssebench::kernels::detail {

inline std::size_t shared_count(const BitMatrix& index, std::size_t a, std::size_t b) {
  const auto ra = index.row(a);
  const auto rb = index.row(b);
  std::size_t n = 0;
  for (std::size_t w = 0; w < ra.size(); ++w) n += static_cast<std::size_t>(std::popcount(ra[w] & rb[w]));
  return n;
}

inline double shared_fraction(const BitMatrix& index, std::size_t a, std::size_t b, std::size_t n_docs) {
  return static_cast<double>(shared_count(index, a, b)) / static_cast<double>(n_docs);
}

inline double neither_fraction(const BitMatrix& index, std::size_t a, std::size_t b, std::size_t n_docs) {
  const std::size_t either = index.row_count(a) + index.row_count(b) - shared_count(index, a, b);
  return static_cast<double>(index.cols() - either) / static_cast<double>(n_docs);
}

inline bool better(const Candidate& x, const Candidate& y) {
  return x.score != y.score ? x.score > y.score : x.keyword < y.keyword;
}

/// Keeps the best `top_k` candidates for unknown row `u`.
inline std::vector<Candidate> best_candidates(const ScoringProblem& pb, std::size_t u, std::size_t top_k) {
  std::vector<Candidate> best;
  best.reserve(top_k + 1);
  const std::size_t n = pb.unpaired_rows->rows();
  for (std::size_t p = 0; p < n; ++p) {
    const Candidate c{p, pair_score(pb, u, p)};
    if (best.size() == top_k && !better(c, best.back())) continue;
    auto pos = std::upper_bound(best.begin(), best.end(), c, better);
    best.insert(pos, c);
    if (best.size() > top_k) best.pop_back();
  }
  return best;
}

}  // namespace ssebench::kernels::detail
