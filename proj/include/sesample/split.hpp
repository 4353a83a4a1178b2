#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "sesample/graph.hpp"

namespace sesample {

enum class Split : std::uint8_t { Train, Val, Test };

std::string_view to_string(Split s) noexcept;
std::optional<Split> parse_split(std::string_view s) noexcept;

/// A target pair with its binary label and split membership.
struct LinkInstance {
  NodeId u = 0;
  NodeId v = 0;
  int label = 0;
  Split split = Split::Train;

  friend bool operator==(const LinkInstance&, const LinkInstance&) = default;
};

/// Canonical key of an unordered pair.
constexpr std::uint64_t pair_key(NodeId a, NodeId b) noexcept {
  const NodeId lo = a < b ? a : b;
  const NodeId hi = a < b ? b : a;
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

using PairSet = std::unordered_set<std::uint64_t>;

struct SplitRatios {
  double train = 0.85;
  double val = 0.05;
  double test = 0.10;
};

/// Throws UsageError unless all ratios are positive and sum to 1 (1e-9).
void validate_ratios(const SplitRatios& r);

/// Labeled instances for all three splits plus the graph of training
/// positives, on which extraction and heuristics operate.
struct SplitSet {
  std::vector<LinkInstance> instances;
  Graph observed;
  std::uint64_t seed = 0;

  std::vector<LinkInstance> of(Split s) const;

  friend bool operator==(const SplitSet&, const SplitSet&) = default;
};

/// Partitions the edges of g by a seeded shuffle (train and val sizes are
/// floor(ratio*|E|), test takes the remainder) and pairs every split with the
/// same number of sampled non-edges of g. Negatives never repeat and never
/// coincide with any edge of the full graph.
SplitSet split_edges(const Graph& g, const SplitRatios& ratios, std::uint64_t seed);

/// Draws `count` distinct unordered non-edges of g, none of them in
/// `exclusions`, in draw order (pairs are returned with u < v). Uses rejection
/// sampling on sparse graphs and explicit enumeration when more than half of
/// all pairs are edges or excluded. Throws DataError if fewer than `count`
/// candidates exist.
std::vector<Edge> sample_negatives(const Graph& g, std::size_t count,
                                   std::uint64_t seed, const PairSet& exclusions = {});

/// Split file: "# sesample-splits v1 seed=<S>" then "u v label split" lines,
/// grouped by split with positives first.
void write_splits(const SplitSet& s, const std::filesystem::path& path);

/// Parses a split file. The observed graph is rebuilt from training
/// positives over `num_nodes` nodes (default: 1 + largest id in the file).
/// Throws DataError naming the offending line on malformed input.
SplitSet read_splits(const std::filesystem::path& path,
                     std::optional<std::size_t> num_nodes = std::nullopt);

/// Observed graph for a set of instances: training positives only.
Graph observed_graph(const std::vector<LinkInstance>& instances, std::size_t num_nodes,
                     std::optional<Matrix> features = std::nullopt);

}  // namespace sesample
