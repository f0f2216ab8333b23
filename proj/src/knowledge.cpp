#include "ssebench/knowledge.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>

#include "ssebench/countermeasure.hpp"
#include "ssebench/error.hpp"
#include "ssebench/kernels.hpp"
#include "ssebench/rng.hpp"

namespace ssebench {

SimilarKnowledge build_similar_knowledge(const BinaryIndex& similar_index, const FrequencyVector& freq,
                                         bool with_co_absence) {
  const std::size_t n_docs = similar_index.n_docs();
  if (n_docs == 0) throw Error("similar index has no documents");
  if (freq.size() != similar_index.universe.size()) {
    throw Error("frequency vector has " + std::to_string(freq.size()) + " entries for a universe of " +
                std::to_string(similar_index.universe.size()));
  }
  SimilarKnowledge out;
  out.universe = similar_index.universe;
  out.frequencies = freq;
  out.n_docs_similar = n_docs;
  out.volumes.resize(out.universe.size());
  for (std::size_t i = 0; i < out.volumes.size(); ++i) {
    out.volumes[i] = static_cast<double>(similar_index.volume(i)) / static_cast<double>(n_docs);
  }
  std::vector<std::size_t> rows(out.universe.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  out.cooccurrence = kernels::cooccurrence(similar_index.matrix, rows, n_docs);
  if (with_co_absence) out.co_absence = kernels::complement_cooccurrence(similar_index.matrix, rows, n_docs);
  return out;
}

std::size_t similar_padding_k(std::size_t k, std::size_t n_docs_similar, std::size_t n_docs_real) {
  if (n_docs_real == 0) throw Error("real index has no documents");
  const double scaled = static_cast<double>(k) * static_cast<double>(n_docs_similar) / static_cast<double>(n_docs_real);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(scaled + 0.5)));
}

BinaryIndex adapt_cgpr(const BinaryIndex& similar_index, std::size_t k, std::size_t n_docs_real, std::uint64_t seed) {
  if (k == 0) throw Error("CGPR adaptation needs k >= 1");
  return pad_cgpr(similar_index, similar_padding_k(k, similar_index.n_docs(), n_docs_real), seed);
}

SimilarKnowledge adapt_clrz(const SimilarKnowledge& knowledge, double tpr, double fpr) {
  if (!knowledge.co_absence) throw Error("obfuscation adaptation needs the co-absence matrix");
  if (!(0.0 <= fpr && fpr <= tpr && tpr <= 1.0)) throw Error("obfuscation adaptation needs 0 <= fpr <= tpr <= 1");
  SimilarKnowledge out = knowledge;
  const Matrix& both = knowledge.cooccurrence;
  const Matrix& neither = *knowledge.co_absence;
  const std::size_t n = knowledge.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        out.cooccurrence(i, j) = tpr * both(i, j) + fpr * neither(i, j);
      } else {
        out.cooccurrence(i, j) = tpr * tpr * both(i, j) + fpr * fpr * neither(i, j) +
                                 tpr * fpr * (1.0 - both(i, j) - neither(i, j));
      }
    }
    out.volumes[i] = tpr * knowledge.volumes[i] + fpr * (1.0 - knowledge.volumes[i]);
  }
  return out;
}

Corpus expand_similar_corpus(const Corpus& similar, std::size_t n_docs_real, std::uint64_t seed) {
  if (similar.size() == 0) throw Error("similar corpus is empty");
  const std::size_t copies = n_docs_real / similar.size();
  const std::size_t remainder = n_docs_real % similar.size();
  Corpus out{{}, Provenance::derived};
  out.documents.reserve(n_docs_real);
  for (std::size_t c = 0; c < copies; ++c) {
    for (const auto& doc : similar.documents) {
      out.documents.push_back({doc.id + "#" + std::to_string(c), doc.keywords});
    }
  }
  std::vector<std::size_t> all(similar.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<std::size_t> picked;
  Rng rng = make_rng(seed, 4);
  std::sample(all.begin(), all.end(), std::back_inserter(picked), remainder, rng);
  for (auto d : picked) {
    out.documents.push_back({similar.documents[d].id + "#" + std::to_string(copies), similar.documents[d].keywords});
  }
  return out;
}

BinaryIndex adapt_seal(const Corpus& similar, const KeywordUniverse& universe, std::size_t x, std::size_t n_docs_real,
                       std::uint64_t seed) {
  if (x < 2) throw Error("SEAL adaptation needs x >= 2");
  const Corpus expanded = expand_similar_corpus(similar, n_docs_real, seed);
  return pad_seal(build_index(expanded, universe), x, derive_seed(seed, 5));
}

BinaryIndex adapt_cluster(const BinaryIndex& similar_index, std::size_t cluster_size, std::uint64_t seed) {
  return pad_cluster(similar_index, cluster_size, seed);
}

}  // namespace ssebench
