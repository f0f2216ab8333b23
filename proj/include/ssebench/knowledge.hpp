#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "ssebench/corpus.hpp"
#include "ssebench/leakage.hpp"
#include "ssebench/matrix.hpp"

namespace ssebench {

/// Attacker priors built from similar data.
struct SimilarKnowledge {
  KeywordUniverse universe;     ///< W_s
  std::vector<double> volumes;  ///< V_s
  FrequencyVector frequencies;  ///< F_s
  Matrix cooccurrence;          ///< C_s
  /// Fraction of documents containing neither keyword; only needed by the
  /// obfuscation adaptation.
  std::optional<Matrix> co_absence;
  std::size_t n_docs_similar = 0;

  std::size_t size() const noexcept { return universe.size(); }
  bool operator==(const SimilarKnowledge&) const = default;
};

SimilarKnowledge build_similar_knowledge(const BinaryIndex& similar_index, const FrequencyVector& freq,
                                         bool with_co_absence = false);

/// round-half-up(k * |D_s| / |D|), clamped to >= 1.
std::size_t similar_padding_k(std::size_t k, std::size_t n_docs_similar, std::size_t n_docs_real);

/// CGPR padding of the similar index with the size-scaled parameter.
BinaryIndex adapt_cgpr(const BinaryIndex& similar_index, std::size_t k, std::size_t n_docs_real, std::uint64_t seed);

/// Replaces V_s and C_s by their expectations under (tpr, fpr) obfuscation.
SimilarKnowledge adapt_clrz(const SimilarKnowledge& knowledge, double tpr, double fpr);

/// Resizes the similar corpus to n_docs_real documents by whole copies plus a
/// seeded sample of the remainder, then indexes it.
Corpus expand_similar_corpus(const Corpus& similar, std::size_t n_docs_real, std::uint64_t seed);

/// expand_similar_corpus + build_index + pad_seal.
BinaryIndex adapt_seal(const Corpus& similar, const KeywordUniverse& universe, std::size_t x, std::size_t n_docs_real,
                       std::uint64_t seed);

BinaryIndex adapt_cluster(const BinaryIndex& similar_index, std::size_t cluster_size, std::uint64_t seed);

}  // namespace ssebench
