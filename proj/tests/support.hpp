#pragma once

// Generators and brute-force oracles shared by the unit and acceptance tests.

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "ssebench/corpus.hpp"
#include "ssebench/jigsaw.hpp"
#include "ssebench/knowledge.hpp"
#include "ssebench/leakage.hpp"
#include "ssebench/rng.hpp"

namespace testsupport {

using namespace ssebench;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("ssebench-" + tag + "-" + std::to_string(derive_seed(reinterpret_cast<std::uintptr_t>(this), ++counter)));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline KeywordUniverse numbered_universe(std::size_t n, const std::string& prefix = "k") {
  std::vector<Keyword> names;
  for (std::size_t i = 0; i < n; ++i) {
    std::string digits = std::to_string(i);
    names.push_back(prefix + std::string(4 - std::min<std::size_t>(4, digits.size()), '0') + digits);
  }
  return KeywordUniverse(std::move(names));
}

inline BinaryIndex index_from_rows(const std::vector<std::vector<int>>& rows) {
  BinaryIndex out;
  out.universe = numbered_universe(rows.size());
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  out.matrix = BitMatrix(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) out.matrix.set(i, j, rows[i][j] != 0);
  }
  return out;
}

inline BinaryIndex random_index(Rng& rng, std::size_t rows, std::size_t cols, double density) {
  std::vector<std::vector<int>> m(rows, std::vector<int>(cols, 0));
  for (auto& r : m) {
    for (auto& v : r) v = uniform01(rng) < density ? 1 : 0;
  }
  return index_from_rows(m);
}

/// Index whose row densities vary, so volumes spread out like a skewed corpus.
inline BinaryIndex skewed_index(Rng& rng, std::size_t rows, std::size_t cols) {
  std::vector<std::vector<int>> m(rows, std::vector<int>(cols, 0));
  for (std::size_t i = 0; i < rows; ++i) {
    const double density = 0.6 / static_cast<double>(i + 1) + 0.02 * uniform01(rng);
    for (auto& v : m[i]) v = uniform01(rng) < density ? 1 : 0;
  }
  return index_from_rows(m);
}

inline Corpus random_corpus(Rng& rng, std::size_t n_docs, std::size_t vocab, double density) {
  Corpus c;
  const auto names = numbered_universe(vocab);
  for (std::size_t d = 0; d < n_docs; ++d) {
    Document doc{"doc" + std::to_string(d), {}};
    for (std::size_t w = 0; w < vocab; ++w) {
      if (uniform01(rng) < density) doc.keywords.push_back(names[w]);
    }
    c.documents.push_back(std::move(doc));
  }
  return c;
}

/// |docs containing both| / n by a direct double loop over documents.
inline double brute_pair(const BinaryIndex& idx, std::size_t a, std::size_t b) {
  std::size_t both = 0;
  for (std::size_t d = 0; d < idx.n_docs(); ++d) both += idx.matrix.get(a, d) && idx.matrix.get(b, d);
  return static_cast<double>(both) / static_cast<double>(idx.n_docs());
}

inline double brute_neither(const BinaryIndex& idx, std::size_t a, std::size_t b) {
  std::size_t none = 0;
  for (std::size_t d = 0; d < idx.n_docs(); ++d) none += !idx.matrix.get(a, d) && !idx.matrix.get(b, d);
  return static_cast<double>(none) / static_cast<double>(idx.n_docs());
}

inline std::size_t brute_volume(const BinaryIndex& idx, std::size_t row) {
  std::size_t n = 0;
  for (std::size_t d = 0; d < idx.n_docs(); ++d) n += idx.matrix.get(row, d);
  return n;
}

/// Random value on a coarse grid so that exact ties show up regularly.
inline double grid_value(Rng& rng, int steps) {
  std::uniform_int_distribution<int> pick(0, steps);
  return static_cast<double>(pick(rng)) / static_cast<double>(steps);
}

struct Instance {
  LeakageObservation obs;
  SimilarKnowledge knowledge;
};

/// Random observation of l tokens and knowledge over m keywords. Volumes and
/// frequencies sit on a coarse grid to exercise the tie rules; the
/// co-occurrence matrices come from random indexes.
inline Instance random_instance(Rng& rng, std::size_t l, std::size_t m, int grid = 40) {
  Instance in;
  const auto real = random_index(rng, l, 30, 0.3);
  const auto similar = random_index(rng, m, 30, 0.3);
  in.obs.tokens.resize(l);
  for (std::size_t i = 0; i < l; ++i) {
    in.obs.tokens[i].value = static_cast<std::uint32_t>(i);
    in.obs.volumes.push_back(grid_value(rng, grid));
    in.obs.frequencies.push_back(grid_value(rng, grid));
  }
  in.obs.cooccurrence = Matrix(l, l);
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < l; ++j) in.obs.cooccurrence(i, j) = brute_pair(real, i, j);
  }
  in.obs.n_docs = 30;
  in.obs.trace_length = 1;
  in.knowledge.universe = numbered_universe(m);
  in.knowledge.cooccurrence = Matrix(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    in.knowledge.volumes.push_back(grid_value(rng, grid));
    in.knowledge.frequencies.probabilities.push_back(grid_value(rng, grid));
    for (std::size_t j = 0; j < m; ++j) in.knowledge.cooccurrence(i, j) = brute_pair(similar, i, j);
  }
  in.knowledge.n_docs_similar = 30;
  return in;
}

/// First-stage matching written out as plain nested loops, independently of the library.
inline PredictionSet brute_recover_dq(const LeakageObservation& obs, const SimilarKnowledge& k, double alpha,
                                      std::size_t base_rec) {
  const std::size_t l = obs.size();
  std::vector<double> d(l);
  for (std::size_t i = 0; i < l; ++i) {
    double best = 1e300;
    for (std::size_t j = 0; j < l; ++j) {
      if (j == i) continue;
      const double v = alpha * std::fabs(obs.volumes[i] - obs.volumes[j]) +
                       (1 - alpha) * std::fabs(obs.frequencies[i] - obs.frequencies[j]);
      if (v < best) best = v;
    }
    d[i] = best;
  }
  std::vector<bool> taken(l, false);
  PredictionSet out;
  for (std::size_t r = 0; r < base_rec; ++r) {
    std::size_t pick = l;
    for (std::size_t i = 0; i < l; ++i) {
      if (taken[i]) continue;
      if (pick == l || d[i] > d[pick]) pick = i;
    }
    taken[pick] = true;
    std::size_t best_w = 0;
    double best_s = 1e300;
    for (std::size_t w = 0; w < k.size(); ++w) {
      const double s = alpha * std::fabs(obs.volumes[pick] - k.volumes[w]) +
                       (1 - alpha) * std::fabs(obs.frequencies[pick] - k.frequencies[w]);
      if (s < best_s) {
        best_s = s;
        best_w = w;
      }
    }
    out.entries.push_back({QueryToken{static_cast<std::uint32_t>(pick)}, best_w, std::nullopt});
  }
  return out;
}

}  // namespace testsupport
