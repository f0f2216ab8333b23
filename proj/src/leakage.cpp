#include "ssebench/leakage.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <string>

#include "ssebench/error.hpp"
#include "ssebench/kernels.hpp"
#include "ssebench/rng.hpp"

namespace ssebench {

namespace {

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

FrequencySeries load_frequency_table(const std::filesystem::path& path, const KeywordUniverse& universe,
                                     std::size_t min_intervals, bool skip_unknown) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open frequency table " + path.string());
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || split_csv(line) != std::vector<std::string>{"keyword", "interval", "count"})
    throw ParseError("expected header 'keyword,interval,count'", 1);

  struct Cell {
    std::size_t keyword, interval;
    double count;
  };
  std::vector<Cell> cells;
  std::size_t n_intervals = min_intervals;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != 3) throw ParseError("expected 3 fields", line_no);
    const std::size_t kw = universe.find(fields[0]);
    if (kw == universe.size() && skip_unknown) continue;
    if (kw == universe.size()) throw ParseError("keyword '" + fields[0] + "' is not in the universe", line_no);
    std::size_t interval = 0;
    auto [p, ec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), interval);
    if (ec != std::errc{} || p != fields[1].data() + fields[1].size())
      throw ParseError("bad interval '" + fields[1] + "'", line_no);
    double count = 0.0;
    try {
      std::size_t used = 0;
      count = std::stod(fields[2], &used);
      if (used != fields[2].size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ParseError("bad count '" + fields[2] + "'", line_no);
    }
    if (!(count >= 0.0) || !std::isfinite(count)) throw ParseError("negative count for '" + fields[0] + "'", line_no);
    cells.push_back({kw, interval, count});
    n_intervals = std::max(n_intervals, interval + 1);
  }

  FrequencySeries series{universe, std::vector<std::vector<double>>(n_intervals, std::vector<double>(universe.size()))};
  for (const auto& c : cells) series.intervals[c.interval][c.keyword] += c.count;
  return series;
}

void save_frequency_table(const FrequencySeries& series, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "keyword,interval,count\n";
  out.precision(17);
  for (std::size_t t = 0; t < series.interval_count(); ++t) {
    for (std::size_t i = 0; i < series.universe.size(); ++i) {
      if (series.intervals[t][i] != 0.0) out << series.universe[i] << ',' << t << ',' << series.intervals[t][i] << '\n';
    }
  }
  if (!out) throw Error("write failed for " + path.string());
}

FrequencyVector window_frequency(const FrequencySeries& series, std::size_t start, std::size_t length) {
  if (start + length > series.interval_count()) {
    throw Error("window [" + std::to_string(start) + ", " + std::to_string(start + length) + ") exceeds the " +
                std::to_string(series.interval_count()) + " available intervals");
  }
  std::vector<double> sums(series.universe.size(), 0.0);
  for (std::size_t t = start; t < start + length; ++t) {
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += series.intervals[t][i];
  }
  const double total = std::accumulate(sums.begin(), sums.end(), 0.0);
  if (!(total > 0.0)) throw Error("frequency window starting at " + std::to_string(start) + " is all zero");
  for (double& s : sums) s /= total;
  return {std::move(sums)};
}

FrequencySeries generate_frequency_series(const KeywordUniverse& universe, const SyntheticFrequencyParams& p) {
  if (p.n_intervals == 0) throw Error("synthetic frequency series needs at least one interval");
  if (!(p.zipf_exponent > 0.0) || p.drift < 0.0) throw Error("invalid synthetic frequency parameters");
  const std::size_t n = universe.size();
  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  Rng rng(derive_seed(p.seed, 2));
  std::shuffle(rank.begin(), rank.end(), rng);

  std::vector<double> log_weight(n);
  for (std::size_t i = 0; i < n; ++i) log_weight[i] = -p.zipf_exponent * std::log(static_cast<double>(rank[i] + 1));

  std::normal_distribution<double> step(0.0, 1.0);
  FrequencySeries series{universe, {}};
  series.intervals.reserve(p.n_intervals);
  for (std::size_t t = 0; t < p.n_intervals; ++t) {
    if (t > 0 && p.drift > 0.0) {
      for (double& lw : log_weight) lw += p.drift * step(rng);
    }
    std::vector<double> counts(n);
    for (std::size_t i = 0; i < n; ++i) counts[i] = 1e6 * std::exp(log_weight[i]);
    series.intervals.push_back(std::move(counts));
  }
  return series;
}

QueryTrace generate_trace(const FrequencyVector& freq, std::size_t eta, std::size_t n_intervals, std::uint64_t seed) {
  if (eta == 0 || n_intervals == 0) throw Error("eta and n_intervals must be >= 1");
  std::discrete_distribution<std::size_t> dist(freq.probabilities.begin(), freq.probabilities.end());
  Rng rng(derive_seed(seed, 3));
  QueryTrace trace;
  trace.queries.resize(eta * n_intervals);
  for (auto& q : trace.queries) q = dist(rng);
  return trace;
}

Observation observe(const BinaryIndex& index, const QueryTrace& trace) {
  if (trace.queries.empty()) throw Error("cannot observe an empty trace");
  const std::size_t n_kw = index.universe.size();
  std::vector<std::size_t> token_of(n_kw, n_kw);
  Observation out;
  auto& leak = out.leakage;
  auto& truth = out.truth;
  for (auto kw : trace.queries) {
    if (kw >= n_kw) throw Error("trace refers to keyword row " + std::to_string(kw) + " outside the index");
    if (token_of[kw] == n_kw) {
      token_of[kw] = truth.keyword_of_token.size();
      leak.tokens.push_back({static_cast<std::uint32_t>(truth.keyword_of_token.size())});
      truth.keyword_of_token.push_back(kw);
      truth.trace_counts.push_back(0);
    }
    ++truth.trace_counts[token_of[kw]];
  }

  const std::size_t l = leak.tokens.size();
  const auto n_docs = static_cast<double>(index.n_docs());
  const auto length = static_cast<double>(trace.size());
  leak.n_docs = index.n_docs();
  leak.trace_length = trace.size();
  leak.volumes.resize(l);
  leak.frequencies.resize(l);
  for (std::size_t i = 0; i < l; ++i) {
    leak.volumes[i] = static_cast<double>(index.volume(truth.keyword_of_token[i])) / n_docs;
    leak.frequencies[i] = static_cast<double>(truth.trace_counts[i]) / length;
  }
  leak.cooccurrence = kernels::cooccurrence(index.matrix, truth.keyword_of_token, index.n_docs());
  return out;
}

}  // namespace ssebench
