#include "sesample/graph.hpp"

#include <algorithm>
#include <string>

#include "sesample/error.hpp"

namespace sesample {

Graph Graph::from_edges(std::span<const Edge> edges, std::size_t num_nodes,
                        std::optional<Matrix> features, BuildStats* stats) {
  if (features && features->rows != num_nodes) {
    throw DataError("feature matrix has " + std::to_string(features->rows) +
                    " rows, expected " + std::to_string(num_nodes));
  }

  BuildStats local_stats;
  std::vector<Edge> directed;
  directed.reserve(edges.size() * 2);
  for (const Edge& e : edges) {
    if (e.u >= num_nodes || e.v >= num_nodes) {
      throw DataError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                      ") references a node outside [0," +
                      std::to_string(num_nodes) + ")");
    }
    if (e.u == e.v) {
      ++local_stats.self_loops_dropped;
      continue;
    }
    directed.push_back({e.u, e.v});
    directed.push_back({e.v, e.u});
  }
  std::sort(directed.begin(), directed.end());
  const auto unique_end = std::unique(directed.begin(), directed.end());
  local_stats.duplicates_collapsed =
      static_cast<std::size_t>(directed.end() - unique_end) / 2;
  directed.erase(unique_end, directed.end());

  Graph g;
  g.row_offsets_.assign(num_nodes + 1, 0);
  g.col_indices_.reserve(directed.size());
  for (const Edge& e : directed) {
    ++g.row_offsets_[e.u + 1];
    g.col_indices_.push_back(e.v);
  }
  for (std::size_t i = 0; i < num_nodes; ++i) {
    g.row_offsets_[i + 1] += g.row_offsets_[i];
  }
  g.features_ = std::move(features);
  if (stats) *stats = local_stats;
  return g;
}

void Graph::check_node(NodeId v) const {
  if (v >= num_nodes()) {
    throw DataError("node id " + std::to_string(v) + " out of range [0," +
                    std::to_string(num_nodes()) + ")");
  }
}

std::size_t Graph::degree(NodeId v) const {
  check_node(v);
  return row_offsets_[v + 1] - row_offsets_[v];
}

std::span<const NodeId> Graph::neighbors(NodeId v) const {
  check_node(v);
  return {col_indices_.data() + row_offsets_[v], row_offsets_[v + 1] - row_offsets_[v]};
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto nbrs = neighbors(u);
  check_node(v);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (NodeId u = 0; u < num_nodes(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.push_back({u, v});
    }
  }
  return out;
}

std::span<const double> Graph::feature_row(NodeId v) const {
  check_node(v);
  if (!features_) return {};
  return features_->row(v);
}

SubgraphSample induced_subgraph(const Graph& g, std::vector<NodeId> nodes,
                                NodeId u, NodeId v) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  if (!nodes.empty() && nodes.back() >= g.num_nodes()) {
    throw DataError("induced_subgraph: node id " + std::to_string(nodes.back()) +
                    " out of range");
  }

  auto local_of = [&](NodeId x) -> std::optional<NodeId> {
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
    if (it == nodes.end() || *it != x) return std::nullopt;
    return static_cast<NodeId>(it - nodes.begin());
  };
  const auto u_local = local_of(u);
  const auto v_local = local_of(v);
  if (!u_local || !v_local) {
    throw DataError("induced_subgraph: target " +
                    std::to_string(!u_local ? u : v) + " not in node set");
  }

  // Neighbor slices and `nodes` are both sorted: the search window only
  // moves forward.
  std::vector<Edge> local_edges;
  for (NodeId i = 0; i < nodes.size(); ++i) {
    const auto nbrs = g.neighbors(nodes[i]);
    auto lo = nodes.begin();
    for (NodeId w : nbrs) {
      lo = std::lower_bound(lo, nodes.end(), w);
      if (lo == nodes.end()) break;
      if (*lo == w) {
        const auto j = static_cast<NodeId>(lo - nodes.begin());
        if (i < j) local_edges.push_back({i, j});
      }
    }
  }

  std::optional<Matrix> no_features;
  SubgraphSample s;
  s.local = Graph::from_edges(local_edges, nodes.size(), no_features);
  s.nodes = std::move(nodes);
  s.u_local = *u_local;
  s.v_local = *v_local;
  s.source_edge_removed = false;
  return s;
}

}  // namespace sesample
