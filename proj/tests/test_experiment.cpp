#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "ssebench/error.hpp"
#include "ssebench/experiment.hpp"
#include "ssebench/knowledge.hpp"
#include "support.hpp"

#include <sstream>

using namespace ssebench;
using testsupport::TempDir;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.corpus.zipf = {};
  c.corpus.zipf.n_docs = 300;
  c.corpus.zipf.vocab_size = 400;
  c.corpus.zipf.mean_doc_len = 30;
  c.corpus.zipf.seed = 3;
  c.universe_size = 40;
  c.split_mode = SplitMode::identical;
  c.frequency.synthetic = {20, 1.0, 0.0, 4};
  c.window_length = 10;
  c.eta = 50;
  c.n_intervals = 10;
  c.params.base_rec = 10;
  c.params.conf_rec = 6;
  c.trials = 3;
  c.master_seed = 17;
  c.workers = 2;
  return c;
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("summarize") {
  CHECK(summarize({}).mean == 0.0);
  CHECK(summarize({4.0}).stddev == 0.0);
  const auto s = summarize({1.0, 2.0, 3.0, 4.0});
  CHECK(s.mean == 2.5);
  CHECK(s.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)));
}

TEST_CASE("run_experiment agrees with the pipeline run by hand") {
  const auto c = small_config();
  const auto report = run_experiment(c);
  REQUIRE(report.ok());
  REQUIRE(report.trials.size() == 3);

  const Corpus corpus = generate_zipf_corpus(c.corpus.zipf);
  const auto universe = top_volume_universe(corpus, c.universe_size);
  const auto series = generate_frequency_series(universe, c.frequency.synthetic);
  const auto index = build_index(corpus, universe);
  const auto freq = window_frequency(series, 0, c.window_length);
  const auto knowledge = build_similar_knowledge(index, freq);
  std::vector<double> accuracies;
  for (std::size_t t = 0; t < 3; ++t) {
    const auto seed = derive_seed(c.master_seed, t);
    const auto trace = generate_trace(freq, c.eta, c.n_intervals, derive_seed(seed, 11));
    const auto observed = observe(index, trace);
    const auto pred = jigsaw_attack(observed.leakage, knowledge, c.params);
    const auto m = score_predictions(pred, observed.leakage, observed.truth);
    const auto& r = report.trials[t];
    CHECK(r.trial == t);
    CHECK(r.seed == seed);
    CHECK(r.observed_queries == observed.leakage.size());
    CHECK(r.metrics->accuracy == m.accuracy);
    CHECK(r.metrics->correct_distinct == m.correct_distinct);
    CHECK(r.overhead.storage_overhead == 1.0);
    CHECK(r.seconds == 0.0);
    accuracies.push_back(m.accuracy);
  }
  CHECK(report.aggregate.succeeded == 3);
  CHECK(report.aggregate.accuracy.mean == doctest::Approx(summarize(accuracies).mean));
}

TEST_CASE("reports on disk") {
  TempDir dir("experiment");
  auto c = small_config();
  const auto report = run_experiment(c);
  emit_reports(report, dir / "run");
  const auto csv = testsupport::read_file(dir / "run" / "metrics.csv");
  CHECK(line_count(csv) == 4);
  CHECK(csv.rfind("trial,accuracy,", 0) == 0);
  CHECK_FALSE(std::filesystem::exists(dir / "run" / "quadrants.csv"));
  CHECK_FALSE(std::filesystem::exists(dir / "run" / "metrics.csv.tmp"));
  const auto j = nlohmann::json::parse(testsupport::read_file(dir / "run" / "report.json"));
  CHECK(j["ok"] == true);
  CHECK(j["trials"].size() == 3);
  CHECK(config_from_json(j["config"]) == c);

  SUBCASE("rerun overwrites with identical bytes, whatever the worker count") {
    c.workers = 1;
    emit_reports(run_experiment(c), dir / "run");
    CHECK(testsupport::read_file(dir / "run" / "metrics.csv") == csv);
  }
  SUBCASE("quadrants.csv has four rows per trial") {
    c.quadrants = true;
    c.attack = AttackKind::recover_dq;
    c.params.base_rec = 0;
    emit_reports(run_experiment(c), dir / "quad");
    const auto q = testsupport::read_file(dir / "quad" / "quadrants.csv");
    CHECK(line_count(q) == 1 + 4 * 3);
    CHECK(q.find(",HVHF,") != std::string::npos);
  }
  SUBCASE("wall clock only on request") {
    c.record_wall_clock = true;
    for (const auto& t : run_experiment(c).trials) CHECK(t.seconds > 0.0);
  }
}

TEST_CASE("failures are recorded, not thrown") {
  SUBCASE("setup error") {
    auto c = small_config();
    c.tau = 11;  // 0 + 11 + 10 > 20 intervals
    const auto report = run_experiment(c);
    CHECK_FALSE(report.ok());
    REQUIRE(report.setup_error.has_value());
    CHECK(report.setup_error->find("tau 11") != std::string::npos);
    CHECK(report.trials.empty());
  }
  SUBCASE("per-trial error") {
    auto c = small_config();
    c.eta = 2;
    c.n_intervals = 2;
    c.params.base_rec = 40;  // more than the handful of queries observed
    c.params.conf_rec = 1;
    const auto report = run_experiment(c);
    CHECK_FALSE(report.ok());
    CHECK_FALSE(report.setup_error.has_value());
    REQUIRE(report.trials.size() == 3);
    for (const auto& t : report.trials) {
      REQUIRE_FALSE(t.ok());
      CHECK(t.error->rfind("trial " + std::to_string(t.trial) + " (seed ", 0) == 0);
    }
    CHECK(report.aggregate.succeeded == 0);
    const auto csv = metrics_csv(report);
    CHECK(csv.find("\n0,,,,,,,0\n") != std::string::npos);
  }
}

TEST_CASE("defenses and attacks run end to end") {
  auto c = small_config();
  c.split_mode = SplitMode::split;
  c.corpus.zipf.n_docs = 600;
  c.params.base_rec = 8;
  c.params.conf_rec = 5;
  for (auto kind : {DefenseKind::none, DefenseKind::cgpr_padding, DefenseKind::clrz_obfuscation,
                    DefenseKind::seal_padding, DefenseKind::cluster_padding}) {
    for (bool adapted : {false, true}) {
      c.defense = {};
      c.defense.kind = kind;
      c.defense.k = 20;
      c.defense.tpr = 0.99;
      c.defense.fpr = 0.01;
      c.defense.x = 2;
      c.defense.cluster_size = 4;
      c.defense.seed = 8;
      c.adaptation = adapted;
      CAPTURE(to_string(kind));
      const auto report = run_experiment(c);
      REQUIRE(report.ok());
      for (const auto& t : report.trials) {
        CHECK(t.overhead.communication_overhead >= (kind == DefenseKind::clrz_obfuscation ? 0.0 : 1.0));
        if (kind == DefenseKind::none) CHECK(t.overhead.storage_overhead == 1.0);
      }
    }
  }
  for (auto attack : {AttackKind::simple, AttackKind::recover_dq, AttackKind::recover_dq_verify}) {
    c.defense = {};
    c.attack = attack;
    const auto report = run_experiment(c);
    REQUIRE(report.ok());
    if (attack == AttackKind::recover_dq) {
      for (const auto& t : report.trials) CHECK(t.metrics->predicted_distinct == 8);
    }
  }
}

TEST_CASE("durability_sweep") {
  auto c = small_config();
  const auto points = durability_sweep(c, {0, 5, 10});
  REQUIRE(points.size() == 3);
  for (const auto& p : points) {
    CHECK(p.report.ok());
    CHECK(p.report.config.tau == p.tau);
    CHECK(p.report.config.master_seed == derive_seed(c.master_seed, p.tau));
  }
  CHECK(metrics_csv(durability_sweep(c, {5})[0].report) == metrics_csv(points[1].report));
  CHECK_THROWS_AS(durability_sweep(c, {11}), Error);
}
