#include "ssebench/config.hpp"

#include <fstream>
#include <set>

#include "ssebench/error.hpp"

namespace ssebench {

using nlohmann::json;

namespace {

// Reads fields of one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw Error(where_ + " must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  template <typename T>
  T get(const std::string& key, T fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    return convert<T>(key);
  }

  template <typename T>
  T require(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) throw Error(where_ + "." + key + " is required");
    return convert<T>(key);
  }

  const json& child(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) throw Error(where_ + "." + key + " is required");
    return j_.at(key);
  }

  std::string path_of(const std::string& key) const { return where_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) throw Error("unknown key " + where_ + "." + key);
    }
  }

 private:
  template <typename T>
  T convert(const std::string& key) {
    try {
      const json& v = j_.at(key);
      if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
          throw Error("expected a non-negative integer");
      }
      return v.get<T>();
    } catch (const json::exception& e) {
      throw Error(where_ + "." + key + ": " + e.what());
    } catch (const Error& e) {
      throw Error(where_ + "." + key + ": " + e.what());
    }
  }

  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

template <typename Enum, std::size_t N>
Enum enum_from(const std::string& name, const std::array<std::pair<Enum, const char*>, N>& table,
               const std::string& where) {
  for (const auto& [value, text] : table) {
    if (name == text) return value;
  }
  throw Error("unknown value '" + name + "' for " + where);
}

template <typename Enum, std::size_t N>
std::string enum_name(Enum value, const std::array<std::pair<Enum, const char*>, N>& table) {
  for (const auto& [v, text] : table) {
    if (v == value) return text;
  }
  return "?";
}

constexpr std::array<std::pair<CorpusSourceKind, const char*>, 3> kCorpusKinds{{
    {CorpusSourceKind::synthetic, "synthetic"}, {CorpusSourceKind::jsonl, "jsonl"}, {CorpusSourceKind::text_dir, "text_dir"}}};
constexpr std::array<std::pair<SplitMode, const char*>, 2> kSplitModes{{{SplitMode::split, "split"},
                                                                         {SplitMode::identical, "identical"}}};
constexpr std::array<std::pair<FrequencySourceKind, const char*>, 2> kFrequencyKinds{
    {{FrequencySourceKind::synthetic, "synthetic"}, {FrequencySourceKind::table, "table"}}};
constexpr std::array<std::pair<AttackKind, const char*>, 4> kAttackKinds{{{AttackKind::jigsaw, "jigsaw"},
                                                                           {AttackKind::simple, "simple"},
                                                                           {AttackKind::recover_dq, "recover_dq"},
                                                                           {AttackKind::recover_dq_verify, "recover_dq_verify"}}};

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  return p.empty() || p.is_absolute() ? p : (base / p).lexically_normal();
}

}  // namespace

bool CorpusSource::operator==(const CorpusSource& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case CorpusSourceKind::synthetic:
      return zipf.n_docs == o.zipf.n_docs && zipf.vocab_size == o.zipf.vocab_size &&
             zipf.mean_doc_len == o.zipf.mean_doc_len && zipf.zipf_exponent == o.zipf.zipf_exponent &&
             zipf.seed == o.zipf.seed && zipf.topics == o.zipf.topics &&
             (zipf.topics == 0 || (zipf.topics_per_doc == o.zipf.topics_per_doc && zipf.topics_per_keyword == o.zipf.topics_per_keyword &&
                                    zipf.topic_boost == o.zipf.topic_boost));
    case CorpusSourceKind::jsonl: return path == o.path;
    case CorpusSourceKind::text_dir: return path == o.path && stopwords == o.stopwords;
  }
  return false;
}

bool FrequencySource::operator==(const FrequencySource& o) const {
  if (kind != o.kind) return false;
  if (kind == FrequencySourceKind::table) return path == o.path && skip_unknown == o.skip_unknown;
  return synthetic.n_intervals == o.synthetic.n_intervals && synthetic.zipf_exponent == o.synthetic.zipf_exponent &&
         synthetic.drift == o.synthetic.drift && synthetic.seed == o.synthetic.seed;
}

std::string to_string(AttackKind kind) { return enum_name(kind, kAttackKinds); }

json config_to_json(const ExperimentConfig& c) {
  json corpus{{"source", enum_name(c.corpus.kind, kCorpusKinds)}};
  switch (c.corpus.kind) {
    case CorpusSourceKind::synthetic:
      corpus["n_docs"] = c.corpus.zipf.n_docs;
      corpus["vocab_size"] = c.corpus.zipf.vocab_size;
      corpus["mean_doc_len"] = c.corpus.zipf.mean_doc_len;
      corpus["zipf_exponent"] = c.corpus.zipf.zipf_exponent;
      corpus["seed"] = c.corpus.zipf.seed;
      if (c.corpus.zipf.topics > 0) {
        corpus["topics"] = c.corpus.zipf.topics;
        corpus["topics_per_doc"] = c.corpus.zipf.topics_per_doc;
        corpus["topics_per_keyword"] = c.corpus.zipf.topics_per_keyword;
        corpus["topic_boost"] = c.corpus.zipf.topic_boost;
      }
      break;
    case CorpusSourceKind::text_dir:
      if (c.corpus.stopwords) corpus["stopwords"] = c.corpus.stopwords->generic_string();
      [[fallthrough]];
    case CorpusSourceKind::jsonl:
      corpus["path"] = c.corpus.path.generic_string();
      break;
  }

  json frequency{{"source", enum_name(c.frequency.kind, kFrequencyKinds)}};
  if (c.frequency.kind == FrequencySourceKind::table) {
    frequency["path"] = c.frequency.path.generic_string();
    frequency["skip_unknown"] = c.frequency.skip_unknown;
  } else {
    frequency["n_intervals"] = c.frequency.synthetic.n_intervals;
    frequency["zipf_exponent"] = c.frequency.synthetic.zipf_exponent;
    frequency["drift"] = c.frequency.synthetic.drift;
    frequency["seed"] = c.frequency.synthetic.seed;
  }

  json defense{{"kind", to_string(c.defense.kind)}};
  switch (c.defense.kind) {
    case DefenseKind::none: break;
    case DefenseKind::cgpr_padding: defense["k"] = c.defense.k; break;
    case DefenseKind::clrz_obfuscation:
      defense["tpr"] = c.defense.tpr;
      defense["fpr"] = c.defense.fpr;
      break;
    case DefenseKind::seal_padding: defense["x"] = c.defense.x; break;
    case DefenseKind::cluster_padding: defense["cluster_size"] = c.defense.cluster_size; break;
  }
  if (c.defense.kind != DefenseKind::none) defense["seed"] = c.defense.seed;

  json universe{{"size", c.universe_size}};
  universe["stopwords"] = c.stopwords ? json(c.stopwords->generic_string()) : json(nullptr);

  return json{
      {"corpus", corpus},
      {"universe", universe},
      {"split", {{"mode", enum_name(c.split_mode, kSplitModes)}, {"fraction", c.split_fraction}}},
      {"frequency", frequency},
      {"window", {{"start", c.window_start}, {"length", c.window_length}}},
      {"tau", c.tau},
      {"eta", c.eta},
      {"n_intervals", c.n_intervals},
      {"defense", defense},
      {"adaptation", c.adaptation},
      {"attack",
       {{"kind", to_string(c.attack)},
        {"alpha", c.params.alpha},
        {"beta", c.params.beta},
        {"base_rec", c.params.base_rec},
        {"conf_rec", c.params.conf_rec},
        {"ref_speed", {{"initial", c.params.ref_speed.initial}, {"growth", c.params.ref_speed.growth}}},
        {"epsilon", c.params.epsilon}}},
      {"quadrants", {{"enabled", c.quadrants}, {"rv", c.rv}, {"rf", c.rf}}},
      {"trials", c.trials},
      {"master_seed", c.master_seed},
      {"workers", c.workers},
      {"output_dir", c.output_dir.generic_string()},
      {"record_wall_clock", c.record_wall_clock},
  };
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  ObjectReader root(j, "config");

  {
    ObjectReader r(root.child("corpus"), "corpus");
    c.corpus.kind = enum_from(r.require<std::string>("source"), kCorpusKinds, "corpus.source");
    if (c.corpus.kind == CorpusSourceKind::synthetic) {
      c.corpus.zipf.n_docs = r.require<std::size_t>("n_docs");
      c.corpus.zipf.vocab_size = r.require<std::size_t>("vocab_size");
      c.corpus.zipf.mean_doc_len = r.require<std::size_t>("mean_doc_len");
      c.corpus.zipf.zipf_exponent = r.get<double>("zipf_exponent", 1.0);
      c.corpus.zipf.seed = r.require<std::uint64_t>("seed");
      c.corpus.zipf.topics = r.get<std::size_t>("topics", 0);
      if (c.corpus.zipf.topics > 0) {
        c.corpus.zipf.topics_per_doc = r.get<std::size_t>("topics_per_doc", 1);
        c.corpus.zipf.topics_per_keyword = r.get<std::size_t>("topics_per_keyword", 1);
        c.corpus.zipf.topic_boost = r.require<double>("topic_boost");
      } else {
        r.get<json>("topics_per_doc", json());
        r.get<json>("topics_per_keyword", json());
        r.get<json>("topic_boost", json());
      }
    } else {
      c.corpus.path = r.require<std::string>("path");
      if (c.corpus.kind == CorpusSourceKind::text_dir && r.has("stopwords"))
        c.corpus.stopwords = r.require<std::string>("stopwords");
      else
        r.get<std::string>("stopwords", "");
    }
    r.finish();
  }
  {
    ObjectReader r(root.child("universe"), "universe");
    c.universe_size = r.require<std::size_t>("size");
    if (r.has("stopwords")) c.stopwords = r.require<std::string>("stopwords");
    else r.get<std::string>("stopwords", "");
    r.finish();
  }
  if (root.has("split")) {
    ObjectReader r(root.child("split"), "split");
    c.split_mode = enum_from(r.get<std::string>("mode", "split"), kSplitModes, "split.mode");
    c.split_fraction = r.get<double>("fraction", 0.5);
    r.finish();
  } else {
    root.get<json>("split", json());
  }
  {
    ObjectReader r(root.child("frequency"), "frequency");
    c.frequency.kind = enum_from(r.require<std::string>("source"), kFrequencyKinds, "frequency.source");
    if (c.frequency.kind == FrequencySourceKind::table) {
      c.frequency.path = r.require<std::string>("path");
      c.frequency.skip_unknown = r.get<bool>("skip_unknown", false);
    } else {
      c.frequency.synthetic.n_intervals = r.require<std::size_t>("n_intervals");
      c.frequency.synthetic.zipf_exponent = r.get<double>("zipf_exponent", 1.0);
      c.frequency.synthetic.drift = r.get<double>("drift", 0.0);
      c.frequency.synthetic.seed = r.require<std::uint64_t>("seed");
    }
    r.finish();
  }
  {
    ObjectReader r(root.child("window"), "window");
    c.window_start = r.get<std::size_t>("start", 0);
    c.window_length = r.require<std::size_t>("length");
    r.finish();
  }
  c.tau = root.get<std::size_t>("tau", 0);
  c.eta = root.require<std::size_t>("eta");
  c.n_intervals = root.require<std::size_t>("n_intervals");
  if (root.has("defense")) {
    ObjectReader r(root.child("defense"), "defense");
    c.defense.kind = defense_kind_from_string(r.require<std::string>("kind"));
    switch (c.defense.kind) {
      case DefenseKind::none: break;
      case DefenseKind::cgpr_padding: c.defense.k = r.require<std::size_t>("k"); break;
      case DefenseKind::clrz_obfuscation:
        c.defense.tpr = r.require<double>("tpr");
        c.defense.fpr = r.require<double>("fpr");
        break;
      case DefenseKind::seal_padding: c.defense.x = r.require<std::size_t>("x"); break;
      case DefenseKind::cluster_padding: c.defense.cluster_size = r.require<std::size_t>("cluster_size"); break;
    }
    if (c.defense.kind != DefenseKind::none) c.defense.seed = r.require<std::uint64_t>("seed");
    r.finish();
  } else {
    root.get<json>("defense", json());
  }
  c.adaptation = root.get<bool>("adaptation", false);
  {
    ObjectReader r(root.child("attack"), "attack");
    c.attack = enum_from(r.get<std::string>("kind", "jigsaw"), kAttackKinds, "attack.kind");
    c.params.alpha = r.get<double>("alpha", c.params.alpha);
    c.params.beta = r.get<double>("beta", c.params.beta);
    c.params.base_rec = r.get<std::size_t>("base_rec", c.params.base_rec);
    c.params.conf_rec = r.get<std::size_t>("conf_rec", c.params.conf_rec);
    c.params.epsilon = r.get<double>("epsilon", c.params.epsilon);
    if (r.has("ref_speed")) {
      const json& rs = r.child("ref_speed");
      if (rs.is_number()) {
        c.params.ref_speed = {rs.get<double>(), 1.0};
      } else {
        ObjectReader s(rs, "attack.ref_speed");
        c.params.ref_speed.initial = s.require<double>("initial");
        c.params.ref_speed.growth = s.get<double>("growth", 1.0);
        s.finish();
      }
    } else {
      r.get<json>("ref_speed", json());
    }
    r.finish();
  }
  if (root.has("quadrants")) {
    ObjectReader r(root.child("quadrants"), "quadrants");
    c.quadrants = r.get<bool>("enabled", true);
    c.rv = r.get<double>("rv", 0.1);
    c.rf = r.get<double>("rf", 0.1);
    r.finish();
  } else {
    root.get<json>("quadrants", json());
  }
  c.trials = root.get<std::size_t>("trials", 1);
  c.master_seed = root.require<std::uint64_t>("master_seed");
  c.workers = root.get<std::size_t>("workers", 1);
  c.output_dir = root.get<std::string>("output_dir", "out");
  c.record_wall_clock = root.get<bool>("record_wall_clock", false);
  root.finish();
  return c;
}

nlohmann::json load_config_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

ExperimentConfig resolve_paths(ExperimentConfig c, const std::filesystem::path& base) {
  c.corpus.path = resolve(c.corpus.path, base);
  if (c.corpus.stopwords) c.corpus.stopwords = resolve(*c.corpus.stopwords, base);
  if (c.stopwords) c.stopwords = resolve(*c.stopwords, base);
  c.frequency.path = resolve(c.frequency.path, base);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  auto c = config_from_json(load_config_json(path));
  return resolve_paths(std::move(c), path.parent_path());
}

void validate_config(const ExperimentConfig& c) {
  auto fail = [](const std::string& what) { throw Error("invalid config: " + what); };
  if (c.universe_size == 0) fail("universe.size must be >= 1");
  if (c.split_mode == SplitMode::split && !(c.split_fraction > 0.0 && c.split_fraction < 1.0))
    fail("split.fraction must lie in (0, 1)");
  if (c.window_length == 0) fail("window.length must be >= 1");
  if (c.eta == 0 || c.n_intervals == 0) fail("eta and n_intervals must be >= 1");
  if (c.frequency.kind == FrequencySourceKind::synthetic &&
      c.window_start + c.tau + c.window_length > c.frequency.synthetic.n_intervals) {
    fail("tau " + std::to_string(c.tau) + " with window [" + std::to_string(c.window_start) + ", +" +
         std::to_string(c.window_length) + ") exceeds the " + std::to_string(c.frequency.synthetic.n_intervals) +
         " synthetic intervals");
  }
  const auto& p = c.params;
  if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) fail("attack.alpha must lie in [0, 1]");
  if (!(p.beta >= 0.0 && p.beta <= 1.0)) fail("attack.beta must lie in [0, 1]");
  if (!(p.epsilon > 0.0)) fail("attack.epsilon must be positive");
  if (!(p.ref_speed.initial > 0.0) || !(p.ref_speed.growth >= 1.0)) fail("attack.ref_speed needs initial > 0, growth >= 1");
  if (c.attack == AttackKind::jigsaw || c.attack == AttackKind::recover_dq_verify) {
    if (p.conf_rec == 0) fail("attack.conf_rec must be >= 1");
    if (p.conf_rec > p.base_rec) fail("attack.conf_rec must not exceed attack.base_rec");
  }
  if (c.quadrants && !(c.rv > 0.0 && c.rv < 1.0 && c.rf > 0.0 && c.rf < 1.0)) fail("quadrants.rv/rf must lie in (0, 1)");
  if (c.trials == 0) fail("trials must be >= 1");
  if (c.workers == 0) fail("workers must be >= 1");
  const auto& d = c.defense;
  switch (d.kind) {
    case DefenseKind::none: break;
    case DefenseKind::cgpr_padding:
      if (d.k == 0) fail("defense.k must be >= 1");
      break;
    case DefenseKind::clrz_obfuscation:
      if (!(0.0 <= d.fpr && d.fpr <= d.tpr && d.tpr <= 1.0)) fail("defense needs 0 <= fpr <= tpr <= 1");
      break;
    case DefenseKind::seal_padding:
      if (d.x < 2) fail("defense.x must be >= 2");
      break;
    case DefenseKind::cluster_padding:
      if (d.cluster_size < 2) fail("defense.cluster_size must be >= 2");
      if (d.cluster_size > c.universe_size) fail("defense.cluster_size exceeds universe.size");
      break;
  }
}

}  // namespace ssebench
