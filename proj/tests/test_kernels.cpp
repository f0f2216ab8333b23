#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "ssebench/kernels.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>

using namespace ssebench;
using namespace ssebench::kernels;

namespace {

std::vector<std::size_t> random_rows(Rng& rng, std::size_t n_rows, std::size_t count) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < count; ++i) rows.push_back(rng() % n_rows);
  return rows;
}

Matrix random_rows_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = uniform01(rng) < 0.2 ? 0.0 : uniform01(rng);
  }
  return row_normalized(m);
}

}  // namespace

TEST_CASE("cooccurrence kernels match a brute-force document scan") {
  Rng rng = make_rng(8, 0);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t docs = 1 + rng() % 200;  // crosses word boundaries
    const auto idx = testsupport::random_index(rng, 12, docs, 0.4);
    const auto rows = random_rows(rng, 12, 1 + rng() % 12);
    const Matrix s = serial::cooccurrence(idx.matrix, rows, docs);
    const Matrix sn = serial::complement_cooccurrence(idx.matrix, rows, docs);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < rows.size(); ++j) {
        CHECK(s(i, j) == testsupport::brute_pair(idx, rows[i], rows[j]));
        CHECK(sn(i, j) == testsupport::brute_neither(idx, rows[i], rows[j]));
      }
    }
    for (int threads : {1, 2, 3, 8}) {
      CHECK(omp::cooccurrence(idx.matrix, rows, docs, threads) == s);
      CHECK(omp::complement_cooccurrence(idx.matrix, rows, docs, threads) == sn);
    }
    CHECK(cooccurrence(idx.matrix, rows, docs, Backend::serial) == s);
    CHECK(cooccurrence(idx.matrix, rows, docs, Backend::openmp) == s);
  }
}

TEST_CASE("row_normalized keeps zero rows at zero") {
  Matrix m(3, 2);
  m(0, 0) = 1;
  m(0, 1) = 3;
  m(2, 1) = 0.5;
  const Matrix n = row_normalized(m);
  CHECK(n(0, 0) == 0.25);
  CHECK(n(0, 1) == 0.75);
  CHECK(n(1, 0) == 0.0);
  CHECK(n(1, 1) == 0.0);
  CHECK(n(2, 1) == 1.0);
}

TEST_CASE("pair_score formula") {
  Matrix u(1, 2), p(1, 2);
  u(0, 0) = 0.6;
  u(0, 1) = 0.4;
  p(0, 0) = 0.3;
  p(0, 1) = 0.7;
  const std::vector<double> uv{0.5}, uf{0.2}, pv{0.4}, pf{0.1};
  ScoringProblem prob{&u, &p, uv, uf, pv, pf, 0.3, 0.9, 1e-10};
  const double l2 = std::sqrt(0.3 * 0.3 + 0.3 * 0.3);
  const double s = 0.3 * 0.1 + 0.7 * 0.1;
  CHECK(pair_score(prob, 0, 0) == doctest::Approx(-std::log(0.9 * l2 + 0.1 * s)).epsilon(1e-14));

  SUBCASE("floor at epsilon") {
    ScoringProblem same{&u, &u, uv, uf, uv, uf, 0.3, 0.9, 1e-10};
    CHECK(pair_score(same, 0, 0) == doctest::Approx(-std::log(1e-10)));
  }
  SUBCASE("monotone in the row distance when beta > 0") {
    Matrix closer(1, 2);
    closer(0, 0) = 0.5;
    closer(0, 1) = 0.5;
    ScoringProblem near{&u, &closer, uv, uf, pv, pf, 0.3, 0.9, 1e-10};
    CHECK(pair_score(near, 0, 0) > pair_score(prob, 0, 0));
  }
}

TEST_CASE("score_candidates: serial oracle, OpenMP equality, ordering") {
  Rng rng = make_rng(9, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t nu = 1 + rng() % 25, np = 1 + rng() % 30, cols = rng() % 10;
    const Matrix u = random_rows_matrix(rng, nu, cols);
    const Matrix p = random_rows_matrix(rng, np, cols);
    std::vector<double> uv, uf, pv, pf;
    for (std::size_t i = 0; i < nu; ++i) {
      uv.push_back(testsupport::grid_value(rng, 10));
      uf.push_back(testsupport::grid_value(rng, 10));
    }
    for (std::size_t i = 0; i < np; ++i) {
      pv.push_back(testsupport::grid_value(rng, 10));
      pf.push_back(testsupport::grid_value(rng, 10));
    }
    const double beta = trial % 3 == 0 ? 0.0 : 0.9;
    ScoringProblem prob{&u, &p, uv, uf, pv, pf, 0.3, beta, 1e-10};
    const std::size_t k = 1 + rng() % np;
    const auto lists = serial::score_candidates(prob, k);
    REQUIRE(lists.size() == nu);
    for (std::size_t i = 0; i < nu; ++i) {
      // oracle: full sort of every pair score
      std::vector<Candidate> all;
      for (std::size_t w = 0; w < np; ++w) all.push_back({w, pair_score(prob, i, w)});
      std::stable_sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) { return a.score > b.score; });
      all.resize(k);
      CHECK(lists[i] == all);
    }
    for (int threads : {1, 2, 4}) CHECK(omp::score_candidates(prob, k, threads) == lists);
  }
}
