#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sesample/matrix.hpp"

namespace sesample {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Counters reported by Graph::from_edges about the cleaning it performed.
struct BuildStats {
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_collapsed = 0;
};

/// Immutable undirected graph in compressed sparse row form.
///
/// Every undirected edge is stored in both directions, neighbor slices are
/// strictly increasing, and there are no self-loops. Node features, when
/// present, form a dense num_nodes x feat_dim matrix.
class Graph {
 public:
  Graph() : row_offsets_(1, 0) {}

  /// Builds a symmetric, deduplicated CSR graph. Reversed and repeated pairs
  /// collapse to one undirected edge; self-loops are dropped and counted.
  /// Throws DataError on out-of-range ids or a feature row-count mismatch.
  static Graph from_edges(std::span<const Edge> edges, std::size_t num_nodes,
                          std::optional<Matrix> features = std::nullopt,
                          BuildStats* stats = nullptr);

  std::size_t num_nodes() const noexcept { return row_offsets_.size() - 1; }
  /// Number of undirected edges.
  std::size_t num_edges() const noexcept { return col_indices_.size() / 2; }

  std::size_t degree(NodeId v) const;
  std::span<const NodeId> neighbors(NodeId v) const;
  bool has_edge(NodeId u, NodeId v) const;

  /// Undirected edges with u < v, in lexicographic order.
  std::vector<Edge> edges() const;

  std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
  std::span<const NodeId> col_indices() const noexcept { return col_indices_; }

  bool has_features() const noexcept { return features_.has_value(); }
  std::size_t feat_dim() const noexcept { return features_ ? features_->cols : 0; }
  const std::optional<Matrix>& features() const noexcept { return features_; }
  std::span<const double> feature_row(NodeId v) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  void check_node(NodeId v) const;

  std::vector<std::size_t> row_offsets_;
  std::vector<NodeId> col_indices_;
  std::optional<Matrix> features_;
};

/// Induced subgraph around a target pair, over local ids 0..nodes.size()-1.
/// Local id i corresponds to global id nodes[i]; nodes is sorted.
struct SubgraphSample {
  std::vector<NodeId> nodes;
  Graph local;
  NodeId u_local = 0;
  NodeId v_local = 0;
  bool source_edge_removed = false;

  std::size_t num_nodes() const noexcept { return nodes.size(); }
  std::size_t num_edges() const noexcept { return local.num_edges(); }

  friend bool operator==(const SubgraphSample&, const SubgraphSample&) = default;
};

/// Subgraph of g induced by `nodes` (any order, duplicates allowed). Both
/// targets must be members; throws DataError otherwise.
SubgraphSample induced_subgraph(const Graph& g, std::vector<NodeId> nodes,
                                NodeId u, NodeId v);

}  // namespace sesample
