#include <omp.h>

#include "kernels_common.hpp"
#include "ssebench/kernels.hpp"

namespace ssebench::kernels::omp {

namespace {
int resolve(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }
}  // namespace

Matrix cooccurrence(const BitMatrix& index, std::span<const std::size_t> rows, std::size_t n_docs, int threads) {
  Matrix out(rows.size(), rows.size());
  const auto n = static_cast<std::ptrdiff_t>(rows.size());
#pragma omp parallel for schedule(dynamic, 8) num_threads(resolve(threads))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t j = i; j < n; ++j) {
      const double v = detail::shared_fraction(index, rows[i], rows[j], n_docs);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

Matrix complement_cooccurrence(const BitMatrix& index, std::span<const std::size_t> rows, std::size_t n_docs,
                               int threads) {
  Matrix out(rows.size(), rows.size());
  const auto n = static_cast<std::ptrdiff_t>(rows.size());
#pragma omp parallel for schedule(dynamic, 8) num_threads(resolve(threads))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t j = i; j < n; ++j) {
      const double v = detail::neither_fraction(index, rows[i], rows[j], n_docs);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

CandidateLists score_candidates(const ScoringProblem& pb, std::size_t top_k, int threads) {
  CandidateLists out(pb.unknown_rows->rows());
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(resolve(threads))
  for (std::ptrdiff_t u = 0; u < n; ++u) out[u] = detail::best_candidates(pb, u, top_k);
  return out;
}

}  // namespace ssebench::kernels::omp
