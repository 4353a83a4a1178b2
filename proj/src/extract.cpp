#include "sesample/extract.hpp"

#include <algorithm>
#include <string>

#include "sesample/parallel.hpp"

namespace sesample {
namespace {

void check_targets(const Graph& g, NodeId u, NodeId v) {
  if (u >= g.num_nodes() || v >= g.num_nodes()) {
    throw DataError("target (" + std::to_string(u) + "," + std::to_string(v) +
                    ") out of range for a graph with " + std::to_string(g.num_nodes()) +
                    " nodes");
  }
  if (u == v) throw DataError("target pair has identical endpoints " + std::to_string(u));
}

// Marks every node within `hops` of `root`.
void bounded_bfs(const Graph& g, NodeId root, int hops, std::vector<int>& dist,
                 std::vector<NodeId>& touched) {
  std::vector<NodeId> frontier{root};
  if (dist[root] < 0) touched.push_back(root);
  dist[root] = 0;
  std::vector<int> local(g.num_nodes(), -1);
  local[root] = 0;
  for (int d = 1; d <= hops && !frontier.empty(); ++d) {
    std::vector<NodeId> next;
    for (NodeId x : frontier) {
      for (NodeId y : g.neighbors(x)) {
        if (local[y] >= 0) continue;
        local[y] = d;
        next.push_back(y);
        if (dist[y] < 0) {
          dist[y] = d;
          touched.push_back(y);
        }
      }
    }
    frontier = std::move(next);
  }
}

}  // namespace

std::string_view to_string(ExtractionMode m) noexcept {
  return m == ExtractionMode::Bfs ? "bfs" : "rw";
}

std::optional<ExtractionMode> parse_mode(std::string_view s) noexcept {
  if (s == "bfs") return ExtractionMode::Bfs;
  if (s == "rw") return ExtractionMode::RandomWalk;
  return std::nullopt;
}

void validate(const ExtractionConfig& cfg) {
  if (cfg.hops < 1) throw UsageError("hops must be >= 1");
  if (cfg.mode == ExtractionMode::RandomWalk && cfg.walks < 1) {
    throw UsageError("walks must be >= 1 in rw mode");
  }
}

std::vector<NodeId> bfs_node_set(const Graph& g, NodeId u, NodeId v, int hops) {
  check_targets(g, u, v);
  std::vector<int> dist(g.num_nodes(), -1);
  std::vector<NodeId> touched;
  bounded_bfs(g, u, hops, dist, touched);
  bounded_bfs(g, v, hops, dist, touched);
  std::sort(touched.begin(), touched.end());
  return touched;
}

SubgraphSample bfs_enclosing(const Graph& g, NodeId u, NodeId v, int hops) {
  if (hops < 1) throw UsageError("hops must be >= 1");
  return strip_target_edge(induced_subgraph(g, bfs_node_set(g, u, v, hops), u, v));
}

std::vector<NodeId> random_walk(const Graph& g, NodeId start, int steps, Rng& rng) {
  std::vector<NodeId> path{start};
  path.reserve(static_cast<std::size_t>(std::max(steps, 0)) + 1);
  NodeId cur = start;
  for (int s = 0; s < steps; ++s) {
    const auto nbrs = g.neighbors(cur);
    if (nbrs.empty()) break;
    cur = nbrs[rng.below(nbrs.size())];
    path.push_back(cur);
  }
  return path;
}

std::uint64_t walk_key(std::uint64_t seed, std::uint64_t link_index, int endpoint,
                       int walk) {
  return derive_key(seed, "extract/walk",
                    {link_index, static_cast<std::uint64_t>(endpoint),
                     static_cast<std::uint64_t>(walk)});
}

std::vector<NodeId> rw_node_set(const Graph& g, NodeId u, NodeId v,
                                const ExtractionConfig& cfg, std::uint64_t link_index) {
  check_targets(g, u, v);
  std::vector<NodeId> visited{u, v};
  const NodeId roots[2] = {u, v};
  for (int endpoint = 0; endpoint < 2; ++endpoint) {
    for (int w = 0; w < cfg.walks; ++w) {
      Rng rng(walk_key(cfg.seed, link_index, endpoint, w));
      const auto path = random_walk(g, roots[endpoint], cfg.hops, rng);
      visited.insert(visited.end(), path.begin() + 1, path.end());
    }
  }
  std::sort(visited.begin(), visited.end());
  visited.erase(std::unique(visited.begin(), visited.end()), visited.end());
  return visited;
}

SubgraphSample rw_enclosing(const Graph& g, NodeId u, NodeId v,
                            const ExtractionConfig& cfg, std::uint64_t link_index) {
  if (cfg.mode != ExtractionMode::RandomWalk) {
    throw UsageError("rw_enclosing requires mode rw");
  }
  validate(cfg);
  return strip_target_edge(induced_subgraph(g, rw_node_set(g, u, v, cfg, link_index), u, v));
}

SubgraphSample strip_target_edge(SubgraphSample s) {
  if (s.local.has_edge(s.u_local, s.v_local)) {
    std::vector<Edge> kept;
    for (const Edge& e : s.local.edges()) {
      if (pair_key(e.u, e.v) != pair_key(s.u_local, s.v_local)) kept.push_back(e);
    }
    s.local = Graph::from_edges(kept, s.nodes.size());
  }
  s.source_edge_removed = true;
  return s;
}

SubgraphSample extract_link(const Graph& g, NodeId u, NodeId v,
                            const ExtractionConfig& cfg, std::uint64_t link_index) {
  validate(cfg);
  if (cfg.mode == ExtractionMode::Bfs) return bfs_enclosing(g, u, v, cfg.hops);
  return rw_enclosing(g, u, v, cfg, link_index);
}

std::vector<SubgraphSample> extract_batch(const Graph& g,
                                          const std::vector<LinkInstance>& instances,
                                          const ExtractionConfig& cfg, unsigned threads) {
  validate(cfg);
  std::vector<SubgraphSample> out(instances.size());
  parallel_for(instances.size(), threads, [&](std::size_t i) {
    try {
      out[i] = extract_link(g, instances[i].u, instances[i].v, cfg, i);
    } catch (const std::exception& e) {
      throw ExtractionError(i, e.what());
    }
  });
  return out;
}

}  // namespace sesample
