#include "ssebench/jigsaw.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ssebench/error.hpp"

namespace ssebench {

namespace {

Matrix submatrix(const Matrix& m, std::span<const std::size_t> rows, std::span<const std::size_t> cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  }
  return out;
}

void check_prediction_keywords(const PredictionSet& pred, const LeakageObservation& obs,
                               const SimilarKnowledge& knowledge) {
  for (const auto& p : pred.entries) {
    if (p.token.value >= obs.size()) throw Error("prediction refers to unknown token " + std::to_string(p.token.value));
    if (p.keyword >= knowledge.size()) throw Error("prediction refers to keyword row " + std::to_string(p.keyword));
  }
}

}  // namespace

std::size_t RefSpeed::at(std::size_t iteration) const {
  const double speed = initial * std::pow(growth, static_cast<double>(iteration));
  // The tolerance keeps products such as 10 * 1.1 = 11.000000000000002 from rounding up to 12.
  const double rounded = std::ceil(speed - 1e-9);
  return rounded < 1.0 ? 1 : static_cast<std::size_t>(rounded);
}

std::vector<double> differential_distance(const LeakageObservation& obs, double alpha) {
  const std::size_t l = obs.size();
  if (l < 2) throw Error("differential distance needs at least two distinct queries");
  std::vector<double> d(l, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < l; ++j) {
      if (i == j) continue;
      d[i] = std::min(d[i], vf_distance(alpha, obs.volumes[i], obs.frequencies[i], obs.volumes[j], obs.frequencies[j]));
    }
  }
  return d;
}

PredictionSet recover_dq(const LeakageObservation& obs, const SimilarKnowledge& knowledge, double alpha,
                         std::size_t base_rec) {
  if (base_rec > obs.size()) {
    throw Error("base_rec " + std::to_string(base_rec) + " exceeds the " + std::to_string(obs.size()) +
                " observed queries");
  }
  if (knowledge.size() == 0) throw Error("similar universe is empty");
  const auto d = differential_distance(obs, alpha);
  std::vector<std::size_t> order(obs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });

  PredictionSet pred;
  pred.entries.reserve(base_rec);
  for (std::size_t r = 0; r < base_rec; ++r) {
    const std::size_t q = order[r];
    std::size_t best = 0;
    double best_s = std::numeric_limits<double>::infinity();
    for (std::size_t w = 0; w < knowledge.size(); ++w) {
      const double s =
          vf_distance(alpha, obs.volumes[q], obs.frequencies[q], knowledge.volumes[w], knowledge.frequencies[w]);
      if (s < best_s) {
        best_s = s;
        best = w;
      }
    }
    pred.entries.push_back({obs.tokens[q], best, std::nullopt});
  }
  return pred;
}

std::vector<double> verification_distances(const PredictionSet& pred, const LeakageObservation& obs,
                                           const SimilarKnowledge& knowledge) {
  check_prediction_keywords(pred, obs, knowledge);
  std::vector<std::size_t> tokens;
  std::vector<std::size_t> keywords;
  for (const auto& p : pred.entries) {
    tokens.push_back(p.token.value);
    keywords.push_back(p.keyword);
  }
  const Matrix real = kernels::row_normalized(submatrix(obs.cooccurrence, tokens, tokens));
  const Matrix similar = kernels::row_normalized(submatrix(knowledge.cooccurrence, keywords, keywords));
  std::vector<double> out(pred.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double sq = 0.0;
    for (std::size_t j = 0; j < out.size(); ++j) {
      const double diff = real(i, j) - similar(i, j);
      sq += diff * diff;
    }
    out[i] = std::sqrt(sq);
  }
  return out;
}

PredictionSet verify(const PredictionSet& pred, const LeakageObservation& obs, const SimilarKnowledge& knowledge,
                     std::size_t conf_rec) {
  if (conf_rec > pred.size()) {
    throw Error("conf_rec " + std::to_string(conf_rec) + " exceeds the " + std::to_string(pred.size()) +
                " predictions to verify");
  }
  const auto revconf = verification_distances(pred, obs, knowledge);
  std::vector<std::size_t> order(pred.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (revconf[a] != revconf[b]) return revconf[a] > revconf[b];
    return pred.entries[a].token > pred.entries[b].token;
  });
  std::vector<bool> removed(pred.size(), false);
  for (std::size_t r = 0; r < pred.size() - conf_rec; ++r) removed[order[r]] = true;

  PredictionSet out;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!removed[i]) out.entries.push_back(pred.entries[i]);
  }
  return out;
}

std::vector<double> certainties(std::span<const double> scores) {
  std::vector<double> out(scores.size(), kForcedCertainty);
  if (scores.size() < 2) return out;
  // Best and runner-up suffice: the best other score is the runner-up for
  // the leader and the leader for everyone else.
  std::size_t first = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[first]) first = i;
  }
  double second = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i != first) second = std::max(second, scores[i]);
  }
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] - (i == first ? second : scores[first]);
  return out;
}

double certainty_of(const std::vector<kernels::Candidate>& candidates) {
  if (candidates.size() < 2) return kForcedCertainty;
  return candidates[0].score - candidates[1].score;
}

std::vector<std::pair<std::size_t, std::size_t>> select_commits(const kernels::CandidateLists& candidates,
                                                                std::size_t count) {
  std::vector<double> certainty(candidates.size());
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t u = 0; u < candidates.size(); ++u) certainty[u] = certainty_of(candidates[u]);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return certainty[a] > certainty[b]; });

  count = std::min(count, candidates.size());
  std::vector<std::pair<std::size_t, std::size_t>> commits;
  std::vector<std::size_t> deferred;
  std::vector<std::size_t> claimed;
  auto is_claimed = [&](std::size_t kw) { return std::find(claimed.begin(), claimed.end(), kw) != claimed.end(); };

  for (std::size_t u : order) {
    if (commits.size() == count) break;
    if (candidates[u].empty()) continue;
    if (is_claimed(candidates[u][0].keyword)) {
      deferred.push_back(u);
      continue;
    }
    claimed.push_back(candidates[u][0].keyword);
    commits.emplace_back(u, 0);
  }
  for (std::size_t u : deferred) {
    if (commits.size() == count) break;
    for (std::size_t c = 1; c < candidates[u].size(); ++c) {
      if (!is_claimed(candidates[u][c].keyword)) {
        claimed.push_back(candidates[u][c].keyword);
        commits.emplace_back(u, c);
        break;
      }
    }
  }
  return commits;
}

PredictionSet recover_all(const PredictionSet& seed, const LeakageObservation& obs, const SimilarKnowledge& knowledge,
                          const AttackParams& params, RecoveryStats* stats, kernels::Backend backend) {
  check_prediction_keywords(seed, obs, knowledge);
  const std::size_t l = obs.size();
  const std::size_t m = knowledge.size();
  std::vector<bool> token_known(l, false);
  std::vector<bool> keyword_paired(m, false);
  for (const auto& p : seed.entries) {
    if (token_known[p.token.value]) throw Error("seed predicts token " + std::to_string(p.token.value) + " twice");
    if (keyword_paired[p.keyword]) throw Error("seed assigns keyword row " + std::to_string(p.keyword) + " twice");
    token_known[p.token.value] = true;
    keyword_paired[p.keyword] = true;
  }
  if (m - seed.size() < l - seed.size()) {
    throw Error("only " + std::to_string(m - seed.size()) + " unpaired keywords for " +
                std::to_string(l - seed.size()) + " unknown queries");
  }

  PredictionSet result = seed;
  std::vector<std::size_t> rec_tokens;
  std::vector<std::size_t> rec_keywords;
  for (const auto& p : seed.entries) {
    rec_tokens.push_back(p.token.value);
    rec_keywords.push_back(p.keyword);
  }

  if (stats) *stats = {};
  for (std::size_t iteration = 0;; ++iteration) {
    std::vector<std::size_t> unknown;
    std::vector<std::size_t> unpaired;
    for (std::size_t t = 0; t < l; ++t) {
      if (!token_known[t]) unknown.push_back(t);
    }
    if (unknown.empty()) break;
    for (std::size_t w = 0; w < m; ++w) {
      if (!keyword_paired[w]) unpaired.push_back(w);
    }
    if (stats) {
      ++stats->iterations;
      stats->unknown_before.push_back(unknown.size());
    }

    const Matrix real_rows = kernels::row_normalized(submatrix(obs.cooccurrence, unknown, rec_tokens));
    const Matrix similar_rows = kernels::row_normalized(submatrix(knowledge.cooccurrence, unpaired, rec_keywords));
    std::vector<double> uv, uf, pv, pf;
    for (auto t : unknown) {
      uv.push_back(obs.volumes[t]);
      uf.push_back(obs.frequencies[t]);
    }
    for (auto w : unpaired) {
      pv.push_back(knowledge.volumes[w]);
      pf.push_back(knowledge.frequencies[w]);
    }
    const kernels::ScoringProblem problem{&real_rows, &similar_rows, uv, uf, pv, pf,
                                          params.alpha, params.beta, params.epsilon};
    const std::size_t count = std::min(params.ref_speed.at(iteration), unknown.size());
    const auto candidates = kernels::score_candidates(problem, std::min(count + 1, unpaired.size()), backend);

    for (auto [u, c] : select_commits(candidates, count)) {
      const auto& list = candidates[u];
      double certainty = certainty_of(list);
      if (c != 0) {
        // Deferred query: certainty of the committed runner-up within its list.
        std::vector<double> scores;
        for (const auto& cand : list) scores.push_back(cand.score);
        certainty = certainties(scores)[c];
      }
      const std::size_t token = unknown[u];
      const std::size_t keyword = unpaired[list[c].keyword];
      result.entries.push_back({obs.tokens[token], keyword, certainty});
      token_known[token] = true;
      keyword_paired[keyword] = true;
      rec_tokens.push_back(token);
      rec_keywords.push_back(keyword);
    }
  }
  return result;
}

PredictionSet jigsaw_attack(const LeakageObservation& obs, const SimilarKnowledge& knowledge,
                            const AttackParams& params, kernels::Backend backend) {
  if (params.conf_rec == 0) throw Error("no seed predictions: conf_rec is 0");
  if (params.conf_rec > params.base_rec) throw Error("conf_rec must not exceed base_rec");
  const PredictionSet candidates = recover_dq(obs, knowledge, params.alpha, params.base_rec);
  const PredictionSet verified = verify(candidates, obs, knowledge, params.conf_rec);
  if (verified.empty()) throw Error("no seed predictions survived verification");

  // The first stage may map two queries to one keyword. Only the better
  // verified of such predictions seeds the final stage; the others are
  // recovered there like any unknown query.
  const auto revconf = verification_distances(verified, obs, knowledge);
  std::vector<std::size_t> order(verified.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return revconf[a] < revconf[b]; });
  std::vector<bool> keep(verified.size(), false);
  std::vector<bool> used(knowledge.size(), false);
  for (auto i : order) {
    if (used[verified.entries[i].keyword]) continue;
    used[verified.entries[i].keyword] = true;
    keep[i] = true;
  }
  PredictionSet seed;
  for (std::size_t i = 0; i < verified.size(); ++i) {
    if (keep[i]) seed.entries.push_back(verified.entries[i]);
  }
  return recover_all(seed, obs, knowledge, params, nullptr, backend);
}

}  // namespace ssebench
