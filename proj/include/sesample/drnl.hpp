#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "sesample/graph.hpp"
#include "sesample/matrix.hpp"

namespace sesample {

enum class LabelScheme : std::uint8_t { Drnl, ZeroOne };

std::string_view to_string(LabelScheme s) noexcept;
std::optional<LabelScheme> parse_label_scheme(std::string_view s) noexcept;

/// A sample with per-node structural labels and the assembled model input.
struct LabeledSubgraph {
  SubgraphSample sample;
  std::vector<int> labels;
  Matrix node_input;  // empty until assemble_node_input is applied

  friend bool operator==(const LabeledSubgraph&, const LabeledSubgraph&) = default;
};

/// Double-radius hash of a node's two finite, positive target distances:
/// 1 + min(a,b) + floor(d/2) * ceil(d/2 - 1) with d = a + b.
/// Throws UsageError for nonpositive distances.
int drnl_hash(int d_xu, int d_xv);

/// BFS distances from `source` on g with `blocked` removed; -1 = unreachable.
std::vector<int> isolated_distances(const Graph& g, NodeId source, NodeId blocked);

/// Labels every node of s. Targets get 1. Under DRNL, a node unreachable from
/// either target (with the other target removed) gets 0 and everything else
/// gets drnl_hash of its two distances. ZeroOne labels non-targets 0.
LabeledSubgraph label_subgraph(SubgraphSample s, LabelScheme scheme = LabelScheme::Drnl);

/// Row i = one_hot(clamp(labels[i], 0, label_cap), label_cap + 1) followed by
/// g's feature row for the node's global id.
Matrix assemble_node_input(const LabeledSubgraph& ls, const Graph& g, int label_cap);

/// Label cap policy: largest label seen in `training`, clamped to [10, 100].
int choose_label_cap(const std::vector<LabeledSubgraph>& training);

/// Labels and assembles a batch of samples in place of copies.
std::vector<LabeledSubgraph> label_batch(std::vector<SubgraphSample> samples,
                                         LabelScheme scheme, unsigned threads = 1);
void assemble_batch(std::vector<LabeledSubgraph>& batch, const Graph& g, int label_cap,
                    unsigned threads = 1);

/// Bundle file, one block per sample:
///   S n_local n_edges u_local v_local
///   N global_id label        (n_local lines, local id order)
///   E a b                    (n_edges lines, a < b, local ids)
/// preceded by a "# sesample-bundle v1" comment line.
void write_bundle(const std::vector<LabeledSubgraph>& samples,
                  const std::filesystem::path& path);

/// Parses a bundle; node_input is left empty and source_edge_removed is set
/// to whether the local target edge is absent. Throws DataError with the
/// line number on malformed input.
std::vector<LabeledSubgraph> read_bundle(const std::filesystem::path& path);

}  // namespace sesample
