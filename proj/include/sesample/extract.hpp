#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "sesample/error.hpp"
#include "sesample/graph.hpp"
#include "sesample/rng.hpp"
#include "sesample/split.hpp"

namespace sesample {

enum class ExtractionMode : std::uint8_t { Bfs, RandomWalk };

std::string_view to_string(ExtractionMode m) noexcept;
std::optional<ExtractionMode> parse_mode(std::string_view s) noexcept;

struct ExtractionConfig {
  ExtractionMode mode = ExtractionMode::RandomWalk;
  int hops = 2;    // BFS radius, or walk length in rw mode
  int walks = 20;  // walks per endpoint (rw only)
  std::uint64_t seed = 0;
};

/// Throws UsageError unless hops >= 1 (and walks >= 1 in rw mode).
void validate(const ExtractionConfig& cfg);

/// Error raised by extract_batch, carrying the position of the failing link.
class ExtractionError : public DataError {
 public:
  ExtractionError(std::size_t index, const std::string& what)
      : DataError("link #" + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Nodes within `hops` of u or of v (plain BFS on g), sorted.
std::vector<NodeId> bfs_node_set(const Graph& g, NodeId u, NodeId v, int hops);

/// Exact h-hop enclosing subgraph with the target edge stripped.
SubgraphSample bfs_enclosing(const Graph& g, NodeId u, NodeId v, int hops);

/// Uniform random walk of up to `steps` steps; stops early at a node without
/// neighbors. The returned path starts with `start`.
std::vector<NodeId> random_walk(const Graph& g, NodeId start, int steps, Rng& rng);

/// Key of the walk stream for (seed, link, endpoint 0=u/1=v, walk index).
std::uint64_t walk_key(std::uint64_t seed, std::uint64_t link_index, int endpoint,
                       int walk);

/// Union of nodes visited by cfg.walks walks of length cfg.hops from each of
/// u and v, sorted.
std::vector<NodeId> rw_node_set(const Graph& g, NodeId u, NodeId v,
                                const ExtractionConfig& cfg, std::uint64_t link_index);

/// Random-walk sampled enclosing subgraph with the target edge stripped.
/// Output depends only on (g, u, v, cfg, link_index).
SubgraphSample rw_enclosing(const Graph& g, NodeId u, NodeId v,
                            const ExtractionConfig& cfg, std::uint64_t link_index);

/// Removes the local (u, v) edge if present and sets source_edge_removed.
SubgraphSample strip_target_edge(SubgraphSample s);

/// Single-link extraction dispatching on cfg.mode.
SubgraphSample extract_link(const Graph& g, NodeId u, NodeId v,
                            const ExtractionConfig& cfg, std::uint64_t link_index);

/// Extracts every instance (link_index = position) on up to `threads`
/// workers; output order matches input order and does not depend on the
/// schedule. Failures are rethrown as ExtractionError.
std::vector<SubgraphSample> extract_batch(const Graph& g,
                                          const std::vector<LinkInstance>& instances,
                                          const ExtractionConfig& cfg,
                                          unsigned threads = 1);

}  // namespace sesample
