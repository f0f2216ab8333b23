#include "ssebench/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"
#include "ssebench/error.hpp"
#include "ssebench/rng.hpp"

namespace ssebench {

namespace {

std::vector<Keyword> sorted_unique(std::vector<Keyword> keywords) {
  std::sort(keywords.begin(), keywords.end());
  keywords.erase(std::unique(keywords.begin(), keywords.end()), keywords.end());
  return keywords;
}

void check_unique_ids(const Corpus& corpus) {
  std::unordered_set<std::string> seen;
  for (const auto& doc : corpus.documents) {
    if (!seen.insert(doc.id).second) throw Error("duplicate document id '" + doc.id + "'");
  }
}

Corpus load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file " + path.string());
  Corpus corpus;
  corpus.provenance = Provenance::loaded;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("keywords") || !j["keywords"].is_array())
      throw ParseError("expected object with 'id' and 'keywords' array", line_no);
    Document doc;
    if (j["id"].is_string()) {
      doc.id = j["id"].get<std::string>();
    } else if (j["id"].is_number_integer()) {
      doc.id = std::to_string(j["id"].get<long long>());
    } else {
      throw ParseError("'id' must be a string", line_no);
    }
    for (const auto& kw : j["keywords"]) {
      if (!kw.is_string()) throw ParseError("keywords must be strings", line_no);
      doc.keywords.push_back(kw.get<std::string>());
    }
    doc.keywords = sorted_unique(std::move(doc.keywords));
    corpus.documents.push_back(std::move(doc));
  }
  if (corpus.documents.empty()) throw Error("corpus " + path.string() + " is empty");
  check_unique_ids(corpus);
  return corpus;
}

Corpus load_text_dir(const std::filesystem::path& dir, const StopwordSet& stopwords) {
  if (!std::filesystem::is_directory(dir)) throw Error(dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  if (files.empty()) throw Error("corpus directory " + dir.string() + " is empty");
  std::sort(files.begin(), files.end());
  Corpus corpus;
  corpus.provenance = Provenance::loaded;
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot read " + file.string());
    std::stringstream buf;
    buf << in.rdbuf();
    corpus.documents.push_back({std::filesystem::relative(file, dir).generic_string(), tokenize(buf.str(), stopwords)});
  }
  return corpus;
}

}  // namespace

KeywordUniverse::KeywordUniverse(std::vector<Keyword> keywords) : keywords_(std::move(keywords)) {
  position_.reserve(keywords_.size());
  for (std::size_t i = 0; i < keywords_.size(); ++i) {
    if (!position_.emplace(keywords_[i], i).second) throw Error("duplicate keyword '" + keywords_[i] + "' in universe");
  }
}

std::size_t KeywordUniverse::find(std::string_view keyword) const {
  auto it = position_.find(std::string(keyword));
  return it == position_.end() ? size() : it->second;
}

std::vector<std::size_t> BinaryIndex::volumes() const {
  std::vector<std::size_t> out(universe.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = volume(i);
  return out;
}

std::vector<Keyword> tokenize(std::string_view text, const StopwordSet& stopwords) {
  std::vector<Keyword> out;
  std::string token;
  auto flush = [&] {
    if (token.size() >= 3 && !stopwords.contains(token)) out.push_back(token);
    token.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalpha(c)) {
      token.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return sorted_unique(std::move(out));
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stopword list " + path.string());
  StopwordSet out;
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    std::string word = line.substr(b, e - b + 1);
    std::transform(word.begin(), word.end(), word.begin(), [](unsigned char c) { return std::tolower(c); });
    out.insert(std::move(word));
  }
  return out;
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format, const StopwordSet& stopwords) {
  if (!std::filesystem::exists(path)) throw Error("corpus path " + path.string() + " does not exist");
  return format == CorpusFormat::jsonl ? load_jsonl(path) : load_text_dir(path, stopwords);
}

void save_corpus_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& doc : corpus.documents) {
    out << nlohmann::json{{"id", doc.id}, {"keywords", doc.keywords}}.dump() << '\n';
  }
  if (!out) throw Error("write failed for " + path.string());
}

std::string zipf_keyword_name(std::size_t rank, std::size_t vocab_size) {
  const std::size_t width = std::max<std::size_t>(6, std::to_string(vocab_size).size());
  std::string digits = std::to_string(rank);
  return "kw" + std::string(width - digits.size(), '0') + digits;
}

Corpus generate_zipf_corpus(const ZipfCorpusParams& p) {
  if (p.n_docs == 0 || p.vocab_size == 0 || p.mean_doc_len == 0) throw Error("zipf corpus counts must be >= 1");
  if (!(p.zipf_exponent > 0.0)) throw Error("zipf exponent must be positive");

  std::vector<double> weights(p.vocab_size);
  for (std::size_t r = 0; r < p.vocab_size; ++r) weights[r] = std::pow(static_cast<double>(r + 1), -p.zipf_exponent);
  std::discrete_distribution<std::size_t> rank_dist(weights.begin(), weights.end());
  std::poisson_distribution<long> length_dist(static_cast<double>(p.mean_doc_len));

  std::vector<std::string> names(p.vocab_size);
  for (std::size_t r = 0; r < p.vocab_size; ++r) names[r] = zipf_keyword_name(r + 1, p.vocab_size);

  // Optional topic mixture: keyword r belongs to topics_per_keyword distinct
  // topics; a document picks topics_per_doc topics and each draw comes from
  // the plain Zipf law with weight 1, or from topic t's Zipf-restricted law
  // with weight boost * mass[t].
  std::vector<std::vector<std::size_t>> topic_of;
  std::vector<double> topic_mass;
  std::vector<std::discrete_distribution<std::size_t>> topic_dist;
  if (p.topics > 0) {
    if (p.topics_per_doc == 0 || p.topics_per_doc > p.topics) throw Error("topics_per_doc must lie in [1, topics]");
    if (p.topics_per_keyword == 0 || p.topics_per_keyword > p.topics)
      throw Error("topics_per_keyword must lie in [1, topics]");
    if (!(p.topic_boost >= 0.0)) throw Error("topic boost must be non-negative");
    Rng topic_rng(derive_seed(p.seed, 1));
    std::vector<std::size_t> ids(p.topics);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    topic_of.resize(p.vocab_size);
    for (auto& t : topic_of) std::sample(ids.begin(), ids.end(), std::back_inserter(t), p.topics_per_keyword, topic_rng);
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    topic_mass.assign(p.topics, 0.0);
    for (std::size_t t = 0; t < p.topics; ++t) {
      std::vector<double> w(p.vocab_size, 0.0);
      for (std::size_t r = 0; r < p.vocab_size; ++r) {
        if (std::find(topic_of[r].begin(), topic_of[r].end(), t) != topic_of[r].end()) w[r] = weights[r];
      }
      topic_mass[t] = std::accumulate(w.begin(), w.end(), 0.0) / total;
      if (topic_mass[t] == 0.0) w[0] = 1.0;  // empty topic; never drawn since its mass is 0
      topic_dist.emplace_back(w.begin(), w.end());
    }
  }
  std::vector<std::size_t> all_topics(p.topics);
  std::iota(all_topics.begin(), all_topics.end(), std::size_t{0});
  std::vector<std::size_t> doc_topics;

  Rng rng(derive_seed(p.seed, 0));
  Corpus corpus;
  corpus.provenance = Provenance::synthetic;
  corpus.documents.reserve(p.n_docs);
  std::vector<std::size_t> ranks;
  for (std::size_t d = 0; d < p.n_docs; ++d) {
    const auto len = static_cast<std::size_t>(std::max<long>(1, length_dist(rng)));
    ranks.clear();
    if (p.topics == 0) {
      for (std::size_t t = 0; t < len; ++t) ranks.push_back(rank_dist(rng));
    } else {
      doc_topics.clear();
      std::sample(all_topics.begin(), all_topics.end(), std::back_inserter(doc_topics), p.topics_per_doc, rng);
      double mass = 1.0;
      for (auto t : doc_topics) mass += p.topic_boost * topic_mass[t];
      for (std::size_t t = 0; t < len; ++t) {
        double u = uniform01(rng) * mass - 1.0;
        std::size_t pick = doc_topics.size();
        for (std::size_t k = 0; k < doc_topics.size() && u >= 0.0; ++k) {
          pick = k;
          u -= p.topic_boost * topic_mass[doc_topics[k]];
        }
        ranks.push_back(pick == doc_topics.size() ? rank_dist(rng) : topic_dist[doc_topics[pick]](rng));
      }
    }
    std::sort(ranks.begin(), ranks.end());
    ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
    Document doc{"d" + std::to_string(d), {}};
    doc.keywords.reserve(ranks.size());
    for (auto r : ranks) doc.keywords.push_back(names[r]);
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

std::unordered_map<Keyword, std::size_t> document_frequencies(const Corpus& corpus) {
  std::unordered_map<Keyword, std::size_t> counts;
  for (const auto& doc : corpus.documents) {
    for (const auto& kw : doc.keywords) ++counts[kw];
  }
  return counts;
}

KeywordUniverse top_volume_universe(const Corpus& corpus, std::size_t size, const StopwordSet& stopwords) {
  std::vector<std::pair<Keyword, std::size_t>> ranked;
  for (auto& [kw, n] : document_frequencies(corpus)) {
    if (!stopwords.contains(kw)) ranked.emplace_back(kw, n);
  }
  if (ranked.size() < size) {
    throw Error("corpus has " + std::to_string(ranked.size()) + " distinct non-stopword keywords, " +
                std::to_string(size) + " requested");
  }
  auto by_volume = [](const auto& a, const auto& b) { return a.second != b.second ? a.second > b.second : a.first < b.first; };
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(size), ranked.end(), by_volume);
  std::vector<Keyword> out;
  out.reserve(size);
  for (std::size_t i = 0; i < size; ++i) out.push_back(std::move(ranked[i].first));
  return KeywordUniverse(std::move(out));
}

std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw Error("split fraction must lie in (0, 1)");
  const std::size_t n = corpus.size();
  const auto n_first = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 0.5));
  if (n_first == 0 || n_first == n) throw Error("split of " + std::to_string(n) + " documents leaves an empty half");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, 1));
  std::shuffle(order.begin(), order.end(), rng);
  std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_first));
  std::sort(order.begin() + static_cast<std::ptrdiff_t>(n_first), order.end());

  Corpus first{{}, Provenance::derived};
  Corpus second{{}, Provenance::derived};
  first.documents.reserve(n_first);
  second.documents.reserve(n - n_first);
  for (std::size_t i = 0; i < n; ++i) {
    (i < n_first ? first : second).documents.push_back(corpus.documents[order[i]]);
  }
  return {std::move(first), std::move(second)};
}

BinaryIndex build_index(const Corpus& corpus, const KeywordUniverse& universe) {
  BinaryIndex index{universe, BitMatrix(universe.size(), corpus.size()), 0};
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (const auto& kw : corpus.documents[d].keywords) {
      const std::size_t row = universe.find(kw);
      if (row != universe.size()) index.matrix.set(row, d);
    }
  }
  return index;
}

}  // namespace ssebench
