#pragma once

// Hot loops of the workbench in two flavours: a plain serial reference and an
// OpenMP version. Both compute every output entry with the same arithmetic in
// the same order, so their results are bit-identical; the tests and the
// benchmark compare them directly.

#include <cstddef>
#include <span>
#include <vector>

#include "ssebench/matrix.hpp"

namespace ssebench::kernels {

enum class Backend { serial, openmp };

/// Inputs to one round of candidate scoring in the iterative recovery step.
/// Row u of `unknown_rows` and row p of `unpaired_rows` are already
/// row-normalized co-occurrence rows over the same recovered columns.
struct ScoringProblem {
  const Matrix* unknown_rows = nullptr;
  const Matrix* unpaired_rows = nullptr;
  std::span<const double> unknown_volume;
  std::span<const double> unknown_frequency;
  std::span<const double> unpaired_volume;
  std::span<const double> unpaired_frequency;
  double alpha = 0.5;
  double beta = 0.5;
  double epsilon = 1e-10;
};

struct Candidate {
  std::size_t keyword;  ///< row of the unpaired matrix
  double score;

  bool operator==(const Candidate&) const = default;
};

/// Best `top_k` candidates for every unknown row, sorted by score descending,
/// ties by lower keyword position.
using CandidateLists = std::vector<std::vector<Candidate>>;

namespace serial {
/// (rows x rows) matrix of |row_i AND row_j| / n_docs over the selected rows.
Matrix cooccurrence(const BitMatrix& index, std::span<const std::size_t> rows, std::size_t n_docs);
/// (rows x rows) matrix of documents containing neither keyword, / n_docs.
Matrix complement_cooccurrence(const BitMatrix& index, std::span<const std::size_t> rows, std::size_t n_docs);
CandidateLists score_candidates(const ScoringProblem& problem, std::size_t top_k);
}  // namespace serial

namespace omp {
Matrix cooccurrence(const BitMatrix& index, std::span<const std::size_t> rows, std::size_t n_docs, int threads = 0);
Matrix complement_cooccurrence(const BitMatrix& index, std::span<const std::size_t> rows, std::size_t n_docs,
                               int threads = 0);
CandidateLists score_candidates(const ScoringProblem& problem, std::size_t top_k, int threads = 0);
}  // namespace omp

/// Dispatch helpers used by the library code.
Matrix cooccurrence(const BitMatrix& index, std::span<const std::size_t> rows, std::size_t n_docs,
                    Backend backend = Backend::openmp);
Matrix complement_cooccurrence(const BitMatrix& index, std::span<const std::size_t> rows, std::size_t n_docs,
                               Backend backend = Backend::openmp);
CandidateLists score_candidates(const ScoringProblem& problem, std::size_t top_k, Backend backend = Backend::openmp);

/// Score of one (unknown, unpaired) pair; shared by both backends.
double pair_score(const ScoringProblem& problem, std::size_t unknown, std::size_t unpaired);

/// Row i divided by its sum; all-zero rows stay zero.
Matrix row_normalized(const Matrix& m);

}  // namespace ssebench::kernels
