#include "ssebench/countermeasure.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <vector>

#include "ssebench/error.hpp"
#include "ssebench/rng.hpp"

namespace ssebench {

namespace {

// Adds postings so that row i reaches targets[i], drawing the extra documents
// without replacement from `pool` fresh fake columns appended to the index.
BinaryIndex pad_to_targets(const BinaryIndex& index, const std::vector<std::size_t>& targets, std::size_t pool,
                           std::uint64_t seed) {
  BinaryIndex out = index;
  const std::size_t base = index.n_docs();
  out.matrix.resize_cols(base + pool);
  out.fake_doc_count = index.fake_doc_count + pool;
  const auto rows = static_cast<std::ptrdiff_t>(index.universe.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const std::size_t row = static_cast<std::size_t>(i);
    const std::size_t demand = targets[row] - index.volume(row);
    if (demand == 0) continue;
    Rng rng = make_rng(seed, row);
    std::vector<std::size_t> picked;
    picked.reserve(demand);
    std::vector<std::size_t> columns(pool);
    std::iota(columns.begin(), columns.end(), std::size_t{0});
    std::sample(columns.begin(), columns.end(), std::back_inserter(picked), demand, rng);
    for (auto c : picked) out.matrix.set(row, base + c);
  }
  return out;
}

std::size_t max_demand(const BinaryIndex& index, const std::vector<std::size_t>& targets) {
  std::size_t pool = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) pool = std::max(pool, targets[i] - index.volume(i));
  return pool;
}

}  // namespace

std::string to_string(DefenseKind kind) {
  switch (kind) {
    case DefenseKind::none: return "none";
    case DefenseKind::cgpr_padding: return "cgpr_padding";
    case DefenseKind::clrz_obfuscation: return "clrz_obfuscation";
    case DefenseKind::seal_padding: return "seal_padding";
    case DefenseKind::cluster_padding: return "cluster_padding";
  }
  return "none";
}

DefenseKind defense_kind_from_string(const std::string& name) {
  for (auto k : {DefenseKind::none, DefenseKind::cgpr_padding, DefenseKind::clrz_obfuscation, DefenseKind::seal_padding,
                 DefenseKind::cluster_padding}) {
    if (to_string(k) == name) return k;
  }
  throw Error("unknown defense kind '" + name + "'");
}

bool DefenseConfig::operator==(const DefenseConfig& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case DefenseKind::none: return true;
    case DefenseKind::cgpr_padding: return k == o.k && seed == o.seed;
    case DefenseKind::clrz_obfuscation: return tpr == o.tpr && fpr == o.fpr && seed == o.seed;
    case DefenseKind::seal_padding: return x == o.x && seed == o.seed;
    case DefenseKind::cluster_padding: return cluster_size == o.cluster_size && seed == o.seed;
  }
  return false;
}

std::size_t cgpr_target(std::size_t volume, std::size_t k) { return (volume + k - 1) / k * k; }

std::size_t seal_target(std::size_t volume, std::size_t x) {
  if (volume == 0) return 0;
  std::size_t p = 1;
  while (p < volume) p *= x;
  return p;
}

BinaryIndex pad_cgpr(const BinaryIndex& index, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw Error("CGPR padding needs k >= 1");
  std::vector<std::size_t> targets(index.universe.size());
  for (std::size_t i = 0; i < targets.size(); ++i) targets[i] = cgpr_target(index.volume(i), k);
  return pad_to_targets(index, targets, max_demand(index, targets), seed);
}

BinaryIndex obfuscate_clrz(const BinaryIndex& index, double tpr, double fpr, std::uint64_t seed) {
  if (!(0.0 <= fpr && fpr <= tpr && tpr <= 1.0)) throw Error("CLRZ obfuscation needs 0 <= fpr <= tpr <= 1");
  BinaryIndex out = index;
  const std::size_t cols = index.n_docs();
  const auto rows = static_cast<std::ptrdiff_t>(index.universe.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const std::size_t row = static_cast<std::size_t>(i);
    Rng rng = make_rng(seed, row);
    for (std::size_t c = 0; c < cols; ++c) {
      const double u = uniform01(rng);
      out.matrix.set(row, c, index.matrix.get(row, c) ? u < tpr : u < fpr);
    }
  }
  return out;
}

BinaryIndex pad_seal(const BinaryIndex& index, std::size_t x, std::uint64_t seed) {
  if (x < 2) throw Error("SEAL padding needs x >= 2");
  std::vector<std::size_t> targets(index.universe.size());
  for (std::size_t i = 0; i < targets.size(); ++i) targets[i] = seal_target(index.volume(i), x);
  const std::size_t pool = (x - 1) * index.n_docs();
  const std::size_t demand = max_demand(index, targets);
  if (demand > pool) {
    throw Error("SEAL padding demand " + std::to_string(demand) + " exceeds the fake-document pool of " +
                std::to_string(pool));
  }
  return pad_to_targets(index, targets, pool, seed);
}

BinaryIndex pad_cluster(const BinaryIndex& index, std::size_t cluster_size, std::uint64_t seed) {
  if (cluster_size < 2) throw Error("cluster padding needs cluster_size >= 2");
  const std::size_t n = index.universe.size();
  if (n < cluster_size) {
    throw Error("cluster size " + std::to_string(cluster_size) + " exceeds the universe size " + std::to_string(n));
  }
  const auto volumes = index.volumes();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return volumes[a] != volumes[b] ? volumes[a] < volumes[b] : index.universe[a] < index.universe[b];
  });

  std::vector<std::size_t> targets(n);
  const std::size_t groups = n / cluster_size;
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t begin = g * cluster_size;
    const std::size_t end = g + 1 == groups ? n : begin + cluster_size;
    // ascending order: the last member holds the cluster maximum
    const std::size_t top = volumes[order[end - 1]];
    for (std::size_t m = begin; m < end; ++m) targets[order[m]] = top;
  }
  return pad_to_targets(index, targets, max_demand(index, targets), seed);
}

BinaryIndex apply_defense(const BinaryIndex& index, const DefenseConfig& config, std::uint64_t seed) {
  switch (config.kind) {
    case DefenseKind::none: return index;
    case DefenseKind::cgpr_padding: return pad_cgpr(index, config.k, seed);
    case DefenseKind::clrz_obfuscation: return obfuscate_clrz(index, config.tpr, config.fpr, seed);
    case DefenseKind::seal_padding: return pad_seal(index, config.x, seed);
    case DefenseKind::cluster_padding: return pad_cluster(index, config.cluster_size, seed);
  }
  return index;
}

OverheadReport overhead_metrics(const BinaryIndex& original, const BinaryIndex& defended, const QueryTrace& trace) {
  if (!(original.universe == defended.universe)) throw Error("overhead metrics need indexes over the same universe");
  if (original.n_docs() == 0) throw Error("original index has no documents");
  const auto before = original.volumes();
  const auto after = defended.volumes();
  double returned_before = 0.0;
  double returned_after = 0.0;
  for (auto q : trace.queries) {
    returned_before += static_cast<double>(before.at(q));
    returned_after += static_cast<double>(after.at(q));
  }
  if (returned_before == 0.0) throw Error("the trace returns no documents on the original index");
  return {static_cast<double>(defended.n_docs()) / static_cast<double>(original.n_docs()),
          returned_after / returned_before};
}

}  // namespace ssebench
