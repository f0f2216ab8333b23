#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ssebench/matrix.hpp"

namespace ssebench {

using Keyword = std::string;
using StopwordSet = std::unordered_set<std::string>;

struct Document {
  std::string id;
  /// Sorted, duplicate-free.
  std::vector<Keyword> keywords;

  bool operator==(const Document&) const = default;
};

enum class Provenance { loaded, synthetic, derived };

struct Corpus {
  std::vector<Document> documents;
  Provenance provenance = Provenance::derived;

  std::size_t size() const noexcept { return documents.size(); }
  bool operator==(const Corpus&) const = default;
};

/// Ordered, duplicate-free keyword list. The position of a keyword is its
/// row in every index and matrix built over this universe.
class KeywordUniverse {
 public:
  KeywordUniverse() = default;
  explicit KeywordUniverse(std::vector<Keyword> keywords);

  std::size_t size() const noexcept { return keywords_.size(); }
  const Keyword& operator[](std::size_t i) const { return keywords_[i]; }
  const std::vector<Keyword>& keywords() const noexcept { return keywords_; }

  /// Row of `keyword`, or size() when absent.
  std::size_t find(std::string_view keyword) const;
  bool contains(std::string_view keyword) const { return find(keyword) != size(); }

  bool operator==(const KeywordUniverse& other) const { return keywords_ == other.keywords_; }

 private:
  std::vector<Keyword> keywords_;
  std::unordered_map<std::string, std::size_t> position_;
};

/// Keyword-by-document incidence matrix. Columns [0, n_docs - fake_doc_count)
/// are real documents; the remaining columns are injected padding documents.
struct BinaryIndex {
  KeywordUniverse universe;
  BitMatrix matrix;
  std::size_t fake_doc_count = 0;

  std::size_t n_docs() const noexcept { return matrix.cols(); }
  std::size_t volume(std::size_t keyword) const noexcept { return matrix.row_count(keyword); }
  std::vector<std::size_t> volumes() const;

  bool operator==(const BinaryIndex&) const = default;
};

enum class CorpusFormat { jsonl, text_dir };

/// Lowercases, keeps alphabetic runs of length >= 3 that are not stopwords,
/// and returns the sorted distinct set.
std::vector<Keyword> tokenize(std::string_view text, const StopwordSet& stopwords);

/// One stopword per line; blank lines and lines starting with '#' ignored.
StopwordSet load_stopwords(const std::filesystem::path& path);

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format, const StopwordSet& stopwords = {});

void save_corpus_jsonl(const Corpus& corpus, const std::filesystem::path& path);

struct ZipfCorpusParams {
  std::size_t n_docs = 1000;
  std::size_t vocab_size = 1000;
  std::size_t mean_doc_len = 50;
  double zipf_exponent = 1.0;
  std::uint64_t seed = 0;
  /// Topic mixture; 0 topics draws every keyword i.i.d. from the Zipf law.
  std::size_t topics = 0;
  std::size_t topics_per_doc = 1;
  std::size_t topics_per_keyword = 1;
  double topic_boost = 0.0;
};

/// Keyword names are "kw" followed by the zero-padded Zipf rank, so the
/// lexicographic order of names equals rank order.
Corpus generate_zipf_corpus(const ZipfCorpusParams& params);
std::string zipf_keyword_name(std::size_t rank, std::size_t vocab_size);

/// Number of documents containing each keyword.
std::unordered_map<Keyword, std::size_t> document_frequencies(const Corpus& corpus);

/// The `size` keywords with the highest document count, stopwords excluded,
/// ties broken lexicographically ascending.
KeywordUniverse top_volume_universe(const Corpus& corpus, std::size_t size, const StopwordSet& stopwords = {});

/// Uniform seeded partition; the first half holds round-half-up(fraction * |corpus|) documents.
std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus, double fraction, std::uint64_t seed);

BinaryIndex build_index(const Corpus& corpus, const KeywordUniverse& universe);

}  // namespace ssebench
