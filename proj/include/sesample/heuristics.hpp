#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "sesample/graph.hpp"
#include "sesample/split.hpp"

namespace sesample {

enum class HeuristicKind : std::uint8_t { CommonNeighbors, AdamicAdar, PersonalizedPageRank };

std::string_view to_string(HeuristicKind k) noexcept;
std::optional<HeuristicKind> parse_heuristic(std::string_view s) noexcept;

struct HeuristicConfig {
  HeuristicKind kind = HeuristicKind::CommonNeighbors;
  double ppr_alpha = 0.85;  // probability of following an edge; 1 - alpha restarts
  double ppr_tol = 1e-6;    // L1 change between iterations
  int ppr_max_iter = 1000;
};

/// Throws UsageError unless alpha is in (0,1) and tol > 0.
void validate(const HeuristicConfig& cfg);

std::size_t common_neighbors(const Graph& g, NodeId u, NodeId v);

/// Sum over common neighbors w of 1/ln(deg(w)); terms with deg(w) <= 1 are
/// skipped so the result is always finite.
double adamic_adar(const Graph& g, NodeId u, NodeId v);

/// Personalized PageRank vector restarting at `source`, by power iteration
/// until the L1 change drops below tol. Mass at nodes without neighbors
/// returns to the source. Throws DataError after max_iter iterations.
std::vector<double> ppr_vector(const Graph& g, NodeId source, double alpha, double tol,
                               int max_iter = 1000);

/// pi_u[v] + pi_v[u].
double ppr_score(const Graph& g, NodeId u, NodeId v, double alpha, double tol,
                 int max_iter = 1000);

/// Scores each instance on g in input order.
std::vector<double> score_instances(const Graph& g, const std::vector<LinkInstance>& instances,
                                    const HeuristicConfig& cfg, unsigned threads = 1);

}  // namespace sesample
