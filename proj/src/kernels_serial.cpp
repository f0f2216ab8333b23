#include <algorithm>
#include <cmath>

#include "kernels_common.hpp"
#include "ssebench/kernels.hpp"

namespace ssebench::kernels {

double pair_score(const ScoringProblem& pb, std::size_t u, std::size_t p) {
  const auto a = pb.unknown_rows->row(u);
  const auto b = pb.unpaired_rows->row(p);
  double sq = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r) {
    const double d = a[r] - b[r];
    sq += d * d;
  }
  const double s = pb.alpha * std::abs(pb.unknown_volume[u] - pb.unpaired_volume[p]) +
                   (1.0 - pb.alpha) * std::abs(pb.unknown_frequency[u] - pb.unpaired_frequency[p]);
  const double arg = pb.beta * std::sqrt(sq) + (1.0 - pb.beta) * s;
  return -std::log(std::max(arg, pb.epsilon));
}

Matrix row_normalized(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double sum = 0.0;
    for (double v : m.row(i)) sum += v;
    if (sum == 0.0) continue;
    auto dst = out.row(i);
    auto src = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) dst[j] = src[j] / sum;
  }
  return out;
}

namespace serial {

Matrix cooccurrence(const BitMatrix& index, std::span<const std::size_t> rows, std::size_t n_docs) {
  Matrix out(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i; j < rows.size(); ++j) {
      const double v = detail::shared_fraction(index, rows[i], rows[j], n_docs);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

Matrix complement_cooccurrence(const BitMatrix& index, std::span<const std::size_t> rows, std::size_t n_docs) {
  Matrix out(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i; j < rows.size(); ++j) {
      const double v = detail::neither_fraction(index, rows[i], rows[j], n_docs);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

CandidateLists score_candidates(const ScoringProblem& pb, std::size_t top_k) {
  CandidateLists out(pb.unknown_rows->rows());
  for (std::size_t u = 0; u < out.size(); ++u) out[u] = detail::best_candidates(pb, u, top_k);
  return out;
}

}  // namespace serial

Matrix cooccurrence(const BitMatrix& index, std::span<const std::size_t> rows, std::size_t n_docs, Backend backend) {
  return backend == Backend::serial ? serial::cooccurrence(index, rows, n_docs) : omp::cooccurrence(index, rows, n_docs);
}

Matrix complement_cooccurrence(const BitMatrix& index, std::span<const std::size_t> rows, std::size_t n_docs,
                               Backend backend) {
  return backend == Backend::serial ? serial::complement_cooccurrence(index, rows, n_docs)
                                    : omp::complement_cooccurrence(index, rows, n_docs);
}

CandidateLists score_candidates(const ScoringProblem& problem, std::size_t top_k, Backend backend) {
  return backend == Backend::serial ? serial::score_candidates(problem, top_k) : omp::score_candidates(problem, top_k);
}

}  // namespace ssebench::kernels
