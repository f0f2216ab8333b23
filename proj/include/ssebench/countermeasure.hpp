#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "ssebench/corpus.hpp"
#include "ssebench/leakage.hpp"

namespace ssebench {

enum class DefenseKind { none, cgpr_padding, clrz_obfuscation, seal_padding, cluster_padding };

std::string to_string(DefenseKind kind);
DefenseKind defense_kind_from_string(const std::string& name);

/// Only the fields of the active kind are read.
struct DefenseConfig {
  DefenseKind kind = DefenseKind::none;
  std::size_t k = 1;             // cgpr
  double tpr = 1.0;              // clrz
  double fpr = 0.0;              // clrz
  std::size_t x = 2;             // seal
  std::size_t cluster_size = 2;  // cluster
  std::uint64_t seed = 0;

  /// Compares only the fields the active kind reads.
  bool operator==(const DefenseConfig& other) const;
};

struct OverheadReport {
  double storage_overhead = 1.0;
  double communication_overhead = 1.0;
};

/// Pads each volume up to the next multiple of k using a shared pool of fake documents.
BinaryIndex pad_cgpr(const BinaryIndex& index, std::size_t k, std::uint64_t seed);

/// Keeps each 1-entry with probability tpr and raises each 0-entry with probability fpr.
BinaryIndex obfuscate_clrz(const BinaryIndex& index, double tpr, double fpr, std::uint64_t seed);

/// Pads each non-zero volume to the next power of x; the fake pool holds (x-1)*n_docs documents.
BinaryIndex pad_seal(const BinaryIndex& index, std::size_t x, std::uint64_t seed);

/// Sorts keywords by volume, groups runs of cluster_size (a short tail joins
/// the last group) and pads every keyword to its group's maximum.
BinaryIndex pad_cluster(const BinaryIndex& index, std::size_t cluster_size, std::uint64_t seed);

BinaryIndex apply_defense(const BinaryIndex& index, const DefenseConfig& config, std::uint64_t seed);

OverheadReport overhead_metrics(const BinaryIndex& original, const BinaryIndex& defended, const QueryTrace& trace);

/// Smallest multiple of k that is >= volume.
std::size_t cgpr_target(std::size_t volume, std::size_t k);
/// Smallest power of x that is >= volume (0 stays 0).
std::size_t seal_target(std::size_t volume, std::size_t x);

}  // namespace ssebench
