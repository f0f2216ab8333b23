#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "ssebench/countermeasure.hpp"
#include "ssebench/error.hpp"
#include "ssebench/knowledge.hpp"
#include "support.hpp"

#include <map>

using namespace ssebench;

namespace {

FrequencyVector uniform_freq(std::size_t n) { return {std::vector<double>(n, 1.0 / static_cast<double>(n))}; }

}  // namespace

TEST_CASE("build_similar_knowledge") {
  SUBCASE("single document holding both keywords") {
    const auto k = build_similar_knowledge(testsupport::index_from_rows({{1}, {1}}), uniform_freq(2));
    CHECK(k.cooccurrence(0, 0) == 1.0);
    CHECK(k.cooccurrence(0, 1) == 1.0);
    CHECK(k.cooccurrence(1, 1) == 1.0);
    CHECK(k.volumes == std::vector<double>{1.0, 1.0});
    CHECK_FALSE(k.co_absence.has_value());
  }
  SUBCASE("disjoint keywords") {
    const auto k = build_similar_knowledge(testsupport::index_from_rows({{1, 0}, {0, 1}}), uniform_freq(2), true);
    CHECK(k.cooccurrence(0, 1) == 0.0);
    CHECK((*k.co_absence)(0, 1) == 0.0);
    CHECK((*k.co_absence)(0, 0) == 0.5);
  }
  SUBCASE("identical to the observed leakage on the same index") {
    Rng rng = make_rng(4, 0);
    const auto idx = testsupport::random_index(rng, 8, 40, 0.3);
    const auto k = build_similar_knowledge(idx, uniform_freq(8));
    const auto o = observe(idx, {{3, 1, 6}}).leakage;
    const std::size_t rows[] = {3, 1, 6};
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) CHECK(o.cooccurrence(i, j) == k.cooccurrence(rows[i], rows[j]));
    }
  }
  SUBCASE("errors") {
    BinaryIndex empty = testsupport::index_from_rows({{}, {}});
    CHECK_THROWS_AS(build_similar_knowledge(empty, uniform_freq(2)), Error);
    CHECK_THROWS_AS(build_similar_knowledge(testsupport::index_from_rows({{1}}), uniform_freq(2)), Error);
  }
}

TEST_CASE("similar_padding_k") {
  CHECK(similar_padding_k(1000, 500, 500) == 1000);
  CHECK(similar_padding_k(1000, 250, 500) == 500);
  CHECK(similar_padding_k(1, 3, 1000) == 1);
  CHECK(similar_padding_k(5, 1, 2) == 3);  // 2.5 rounds half up
  CHECK_THROWS_AS(similar_padding_k(5, 1, 0), Error);
}

TEST_CASE("adapt_cgpr pads with the scaled k") {
  Rng rng = make_rng(5, 0);
  const auto idx = testsupport::skewed_index(rng, 10, 100);
  CHECK(adapt_cgpr(idx, 20, 200, 3) == pad_cgpr(idx, 10, 3));
}

TEST_CASE("adapt_clrz") {
  Rng rng = make_rng(6, 0);
  const auto idx = testsupport::random_index(rng, 6, 50, 0.4);
  const auto k = build_similar_knowledge(idx, uniform_freq(6), true);

  CHECK(adapt_clrz(k, 1.0, 0.0) == k);
  for (double v : adapt_clrz(k, 1.0, 1.0).volumes) CHECK(v == 1.0);
  CHECK_THROWS_AS(adapt_clrz(build_similar_knowledge(idx, uniform_freq(6)), 1.0, 0.0), Error);

  SUBCASE("hand-worked entry") {
    SimilarKnowledge two;
    two.universe = testsupport::numbered_universe(2);
    two.volumes = {0.4, 0.6};
    two.frequencies = uniform_freq(2);
    two.cooccurrence = Matrix(2, 2);
    two.cooccurrence(0, 1) = two.cooccurrence(1, 0) = 0.2;
    two.cooccurrence(0, 0) = 0.4;
    two.cooccurrence(1, 1) = 0.6;
    two.co_absence = Matrix(2, 2);
    (*two.co_absence)(0, 1) = (*two.co_absence)(1, 0) = 0.5;
    (*two.co_absence)(0, 0) = 0.6;
    (*two.co_absence)(1, 1) = 0.4;
    const auto a = adapt_clrz(two, 0.9, 0.1);
    CHECK(a.cooccurrence(0, 1) == doctest::Approx(0.194).epsilon(1e-12));
    CHECK(a.cooccurrence(0, 0) == doctest::Approx(0.9 * 0.4 + 0.1 * 0.6).epsilon(1e-12));
    CHECK(a.volumes[0] == doctest::Approx(0.9 * 0.4 + 0.1 * 0.6).epsilon(1e-12));
  }
  SUBCASE("expectation matches the empirical mean of real obfuscation") {
    const auto big = testsupport::random_index(rng, 4, 4000, 0.3);
    const auto kb = build_similar_knowledge(big, uniform_freq(4), true);
    const auto expected = adapt_clrz(kb, 0.8, 0.1);
    const auto seen = build_similar_knowledge(obfuscate_clrz(big, 0.8, 0.1, 9), uniform_freq(4));
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) CHECK(std::fabs(seen.cooccurrence(i, j) - expected.cooccurrence(i, j)) < 0.02);
    }
  }
  SUBCASE("property: symmetry preserved and co-absence bound") {
    for (int t = 0; t < 20; ++t) {
      const auto r = testsupport::random_index(rng, 1 + rng() % 10, 1 + rng() % 60, 0.4);
      const auto kn = build_similar_knowledge(r, uniform_freq(r.universe.size()), true);
      const auto a = adapt_clrz(kn, 0.7, 0.2);
      for (std::size_t i = 0; i < kn.size(); ++i) {
        for (std::size_t j = 0; j < kn.size(); ++j) {
          CHECK(a.cooccurrence(i, j) == a.cooccurrence(j, i));
          if (i != j) CHECK(kn.cooccurrence(i, j) + (*kn.co_absence)(i, j) <= 1.0);
        }
      }
    }
  }
}

TEST_CASE("expand_similar_corpus and adapt_seal") {
  Rng rng = make_rng(7, 0);
  const Corpus small = testsupport::random_corpus(rng, 2, 4, 0.5);
  const Corpus five = expand_similar_corpus(small, 5, 1);
  CHECK(five.size() == 5);
  CHECK(expand_similar_corpus(small, 2, 1).size() == 2);
  for (std::size_t i = 0; i < 2; ++i) CHECK(expand_similar_corpus(small, 2, 1).documents[i].keywords == small.documents[i].keywords);
  CHECK(expand_similar_corpus(small, 5, 1) == five);

  SUBCASE("volumes scale by |D| / |D_s| up to the remainder sample") {
    const Corpus c = testsupport::random_corpus(rng, 30, 6, 0.4);
    const auto u = testsupport::numbered_universe(6);
    const auto base = build_index(c, u);
    const auto grown = build_index(expand_similar_corpus(c, 100, 4), u);
    for (std::size_t i = 0; i < 6; ++i) {
      const auto v = base.volume(i);
      CHECK(grown.volume(i) >= 3 * v);
      CHECK(grown.volume(i) <= 3 * v + std::min<std::size_t>(10, v));
    }
    const auto sealed = adapt_seal(c, u, 2, 100, 4);
    CHECK(sealed.n_docs() == 200);
    for (std::size_t i = 0; i < 6; ++i) CHECK(sealed.volume(i) == seal_target(grown.volume(i), 2));
  }
  CHECK_THROWS_AS(expand_similar_corpus(Corpus{}, 3, 0), Error);
}

TEST_CASE("adapt_cluster delegates to pad_cluster") {
  const auto idx = testsupport::index_from_rows({{1, 0, 0}, {1, 1, 0}});
  CHECK(adapt_cluster(idx, 2, 0).volumes() == std::vector<std::size_t>{2, 2});
  const auto flat = testsupport::index_from_rows({{1, 0}, {0, 1}});
  CHECK(adapt_cluster(flat, 2, 0).volumes() == flat.volumes());
}
