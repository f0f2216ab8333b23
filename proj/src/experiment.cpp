#include "ssebench/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ssebench/baseline.hpp"
#include "ssebench/error.hpp"
#include "ssebench/jigsaw.hpp"
#include "ssebench/knowledge.hpp"
#include "ssebench/rng.hpp"

namespace ssebench {

using nlohmann::json;

namespace {

enum SeedStream : std::uint64_t { kSplitStream = 10, kTraceStream = 11, kAdaptStream = 12 };

struct Inputs {
  Corpus corpus;
  KeywordUniverse universe;
  FrequencySeries series;
};

Inputs prepare_inputs(const ExperimentConfig& c) {
  Inputs in;
  switch (c.corpus.kind) {
    case CorpusSourceKind::synthetic: in.corpus = generate_zipf_corpus(c.corpus.zipf); break;
    case CorpusSourceKind::jsonl: in.corpus = load_corpus(c.corpus.path, CorpusFormat::jsonl); break;
    case CorpusSourceKind::text_dir: {
      const StopwordSet tokenizer_stopwords = c.corpus.stopwords ? load_stopwords(*c.corpus.stopwords) : StopwordSet{};
      in.corpus = load_corpus(c.corpus.path, CorpusFormat::text_dir, tokenizer_stopwords);
      break;
    }
  }
  const StopwordSet stopwords = c.stopwords ? load_stopwords(*c.stopwords) : StopwordSet{};
  in.universe = top_volume_universe(in.corpus, c.universe_size, stopwords);
  if (c.frequency.kind == FrequencySourceKind::synthetic) {
    in.series = generate_frequency_series(in.universe, c.frequency.synthetic);
  } else {
    in.series = load_frequency_table(c.frequency.path, in.universe, 0, c.frequency.skip_unknown);
  }
  const std::size_t last = c.window_start + c.tau + c.window_length;
  if (last > in.series.interval_count()) {
    throw Error("tau " + std::to_string(c.tau) + ": user window [" + std::to_string(c.window_start + c.tau) + ", " +
                std::to_string(last) + ") exceeds the " + std::to_string(in.series.interval_count()) +
                " available intervals");
  }
  return in;
}

SimilarKnowledge attacker_knowledge(const ExperimentConfig& c, const Corpus& similar_corpus,
                                    const BinaryIndex& similar_index, const FrequencyVector& freq,
                                    std::size_t n_docs_real, std::uint64_t seed) {
  if (!c.adaptation || c.defense.kind == DefenseKind::none) return build_similar_knowledge(similar_index, freq);
  const auto& d = c.defense;
  switch (d.kind) {
    case DefenseKind::none: break;
    case DefenseKind::cgpr_padding:
      return build_similar_knowledge(adapt_cgpr(similar_index, d.k, n_docs_real, seed), freq);
    case DefenseKind::clrz_obfuscation:
      return adapt_clrz(build_similar_knowledge(similar_index, freq, true), d.tpr, d.fpr);
    case DefenseKind::seal_padding:
      return build_similar_knowledge(adapt_seal(similar_corpus, similar_index.universe, d.x, n_docs_real, seed), freq);
    case DefenseKind::cluster_padding:
      return build_similar_knowledge(adapt_cluster(similar_index, d.cluster_size, seed), freq);
  }
  return build_similar_knowledge(similar_index, freq);
}

PredictionSet run_attack(const ExperimentConfig& c, const LeakageObservation& obs, const SimilarKnowledge& knowledge) {
  switch (c.attack) {
    case AttackKind::jigsaw: return jigsaw_attack(obs, knowledge, c.params);
    case AttackKind::simple: return simple_attack(obs, knowledge);
    case AttackKind::recover_dq:
    case AttackKind::recover_dq_verify: {
      const std::size_t base = c.params.base_rec == 0 ? obs.size() : c.params.base_rec;
      auto pred = recover_dq(obs, knowledge, c.params.alpha, base);
      if (c.attack == AttackKind::recover_dq_verify) pred = verify(pred, obs, knowledge, c.params.conf_rec);
      return pred;
    }
  }
  throw Error("unknown attack kind");
}

TrialResult run_trial(const ExperimentConfig& c, const Inputs& in, std::size_t t) {
  TrialResult r;
  r.trial = t;
  r.seed = derive_seed(c.master_seed, t);
  const auto start = std::chrono::steady_clock::now();
  try {
    Corpus real_corpus;
    Corpus similar_corpus;
    if (c.split_mode == SplitMode::identical) {
      real_corpus = in.corpus;
      similar_corpus = in.corpus;
    } else {
      std::tie(real_corpus, similar_corpus) = split_corpus(in.corpus, c.split_fraction, derive_seed(r.seed, kSplitStream));
    }
    const BinaryIndex real_index = build_index(real_corpus, in.universe);
    const BinaryIndex similar_index = build_index(similar_corpus, in.universe);
    const BinaryIndex defended = apply_defense(real_index, c.defense, derive_seed(c.defense.seed, r.seed));

    const FrequencyVector attacker_freq = window_frequency(in.series, c.window_start, c.window_length);
    const FrequencyVector user_freq = window_frequency(in.series, c.window_start + c.tau, c.window_length);
    const QueryTrace trace = generate_trace(user_freq, c.eta, c.n_intervals, derive_seed(r.seed, kTraceStream));
    const Observation observed = observe(defended, trace);
    r.observed_queries = observed.leakage.size();

    const SimilarKnowledge knowledge = attacker_knowledge(c, similar_corpus, similar_index, attacker_freq,
                                                          real_index.n_docs(), derive_seed(r.seed, kAdaptStream));
    const PredictionSet pred = run_attack(c, observed.leakage, knowledge);
    MetricsReport m = score_predictions(pred, observed.leakage, observed.truth);
    if (c.quadrants) m.per_quadrant = quadrant_accuracy(pred, observed.leakage, observed.truth, c.rv, c.rf);
    r.metrics = m;
    r.overhead = overhead_metrics(real_index, defended, trace);
  } catch (const std::exception& e) {
    r.error = "trial " + std::to_string(t) + " (seed " + std::to_string(r.seed) + "): " + e.what();
  }
  if (c.record_wall_clock) {
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return r;
}

AggregateReport aggregate(const std::vector<TrialResult>& trials) {
  std::vector<double> acc, rec, uniq, distinct, storage, comm;
  for (const auto& t : trials) {
    if (!t.ok()) continue;
    acc.push_back(t.metrics->accuracy);
    rec.push_back(t.metrics->recovery_rate);
    uniq.push_back(t.metrics->accuracy_unique);
    distinct.push_back(static_cast<double>(t.metrics->correct_distinct));
    storage.push_back(t.overhead.storage_overhead);
    comm.push_back(t.overhead.communication_overhead);
  }
  AggregateReport a;
  a.succeeded = acc.size();
  a.accuracy = summarize(acc);
  a.recovery_rate = summarize(rec);
  a.accuracy_unique = summarize(uniq);
  a.correct_distinct = summarize(distinct);
  a.storage_overhead = summarize(storage);
  a.communication_overhead = summarize(comm);
  return a;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json summary_json(const Summary& s) { return {{"mean", s.mean}, {"stddev", s.stddev}}; }

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

}  // namespace

bool RunReport::ok() const noexcept {
  if (setup_error) return false;
  for (const auto& t : trials) {
    if (!t.ok()) return false;
  }
  return !trials.empty();
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

RunReport run_experiment(const ExperimentConfig& config) {
  RunReport report;
  report.config = config;
  Inputs inputs;
  try {
    validate_config(config);
    inputs = prepare_inputs(config);
  } catch (const std::exception& e) {
    report.setup_error = e.what();
    return report;
  }

  report.trials.resize(config.trials);
  const int n = static_cast<int>(config.trials);
#pragma omp parallel for schedule(dynamic, 1) num_threads(static_cast<int>(config.workers))
  for (int t = 0; t < n; ++t) {
    report.trials[static_cast<std::size_t>(t)] = run_trial(config, inputs, static_cast<std::size_t>(t));
  }
  report.aggregate = aggregate(report.trials);
  return report;
}

json report_to_json(const RunReport& report) {
  json trials = json::array();
  for (const auto& t : report.trials) {
    json jt{{"trial", t.trial}, {"seed", t.seed}, {"seconds", t.seconds}, {"observed_queries", t.observed_queries}};
    if (t.metrics) {
      const auto& m = *t.metrics;
      jt["metrics"] = {{"accuracy", m.accuracy},
                       {"recovery_rate", m.recovery_rate},
                       {"accuracy_unique", m.accuracy_unique},
                       {"correct_distinct", m.correct_distinct},
                       {"predicted_distinct", m.predicted_distinct}};
      if (m.per_quadrant) {
        json q = json::object();
        for (auto quad : kQuadrants) {
          const auto& s = (*m.per_quadrant)[static_cast<std::size_t>(quad)];
          q[std::string(to_string(quad))] = {{"count", s.count},
                                             {"predicted", s.predicted},
                                             {"correct", s.correct},
                                             {"accuracy", optional_number(s.accuracy)}};
        }
        jt["metrics"]["per_quadrant"] = q;
      }
      jt["overhead"] = {{"storage", t.overhead.storage_overhead}, {"communication", t.overhead.communication_overhead}};
    }
    jt["error"] = t.error ? json(*t.error) : json(nullptr);
    trials.push_back(std::move(jt));
  }
  const auto& a = report.aggregate;
  return json{
      {"config", config_to_json(report.config)},
      {"ok", report.ok()},
      {"setup_error", report.setup_error ? json(*report.setup_error) : json(nullptr)},
      {"trials", trials},
      {"aggregate",
       {{"succeeded", a.succeeded},
        {"accuracy", summary_json(a.accuracy)},
        {"recovery_rate", summary_json(a.recovery_rate)},
        {"accuracy_unique", summary_json(a.accuracy_unique)},
        {"correct_distinct", summary_json(a.correct_distinct)},
        {"storage_overhead", summary_json(a.storage_overhead)},
        {"communication_overhead", summary_json(a.communication_overhead)}}},
  };
}

std::string metrics_csv(const RunReport& report) {
  std::ostringstream out;
  out << "trial,accuracy,recovery_rate,accuracy_unique,correct_distinct,storage_overhead,communication_overhead,seconds\n";
  for (const auto& t : report.trials) {
    out << t.trial << ',';
    if (t.metrics) {
      const auto& m = *t.metrics;
      out << num(m.accuracy) << ',' << num(m.recovery_rate) << ',' << num(m.accuracy_unique) << ','
          << m.correct_distinct << ',' << num(t.overhead.storage_overhead) << ','
          << num(t.overhead.communication_overhead) << ',';
    } else {
      out << ",,,,,,";
    }
    out << num(t.seconds) << '\n';
  }
  return out.str();
}

std::string quadrants_csv(const RunReport& report) {
  std::ostringstream out;
  out << "trial,quadrant,count,predicted,correct,accuracy\n";
  for (const auto& t : report.trials) {
    if (!t.metrics || !t.metrics->per_quadrant) continue;
    for (auto quad : kQuadrants) {
      const auto& s = (*t.metrics->per_quadrant)[static_cast<std::size_t>(quad)];
      out << t.trial << ',' << to_string(quad) << ',' << s.count << ',' << s.predicted << ',' << s.correct << ','
          << (s.accuracy ? num(*s.accuracy) : std::string()) << '\n';
    }
  }
  return out.str();
}

void emit_reports(const RunReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
  write_atomically(dir / "report.json", report_to_json(report).dump(2) + "\n");
  write_atomically(dir / "metrics.csv", metrics_csv(report));
  if (report.config.quadrants) write_atomically(dir / "quadrants.csv", quadrants_csv(report));
}

std::vector<DurabilityPoint> durability_sweep(const ExperimentConfig& config, const std::vector<std::size_t>& taus) {
  std::vector<DurabilityPoint> points(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) {
    ExperimentConfig c = config;
    c.tau = taus[i];
    c.master_seed = derive_seed(config.master_seed, taus[i]);
    points[i] = {taus[i], run_experiment(c)};
    if (points[i].report.setup_error) throw Error(*points[i].report.setup_error);
  }
  return points;
}

ExperimentConfig with_override(const ExperimentConfig& config, const std::string& dotted_key, const std::string& value) {
  json j = config_to_json(config);
  std::string pointer;
  std::stringstream parts(dotted_key);
  for (std::string part; std::getline(parts, part, '.');) {
    if (part.empty()) throw Error("malformed key '" + dotted_key + "'");
    pointer += "/" + part;
  }
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;
  }
  j[json::json_pointer(pointer)] = parsed;
  return config_from_json(j);
}

}  // namespace ssebench
