#include "sesample/generators.hpp"

#include <algorithm>
#include <vector>

#include "sesample/error.hpp"
#include "sesample/rng.hpp"

namespace sesample {

Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(derive_key(seed, "gen/er"));
  std::vector<Edge> edges;
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      if (rng.uniform() < p) edges.push_back({a, b});
    }
  }
  return Graph::from_edges(edges, n);
}

namespace {

Graph grow(std::size_t n, std::size_t m, double p_triad, std::uint64_t seed, const char* tag) {
  if (m < 1 || n <= m) throw UsageError("preferential attachment needs 1 <= m < n");
  Rng rng(derive_key(seed, tag));
  std::vector<Edge> edges;
  std::vector<std::vector<NodeId>> adj(n);
  std::vector<NodeId> endpoints;  // one entry per edge end: degree-weighted pool
  auto link = [&](NodeId a, NodeId b) {
    edges.push_back({a, b});
    adj[a].push_back(b);
    adj[b].push_back(a);
    endpoints.push_back(a);
    endpoints.push_back(b);
  };
  for (NodeId a = 0; a <= m; ++a) {
    for (NodeId b = a + 1; b <= m; ++b) link(a, b);
  }
  for (auto node = static_cast<NodeId>(m + 1); node < n; ++node) {
    std::vector<NodeId> chosen;
    auto take = [&](NodeId t) {
      if (t == node || std::find(chosen.begin(), chosen.end(), t) != chosen.end()) return false;
      chosen.push_back(t);
      return true;
    };
    while (chosen.size() < m) {
      const NodeId target = endpoints[rng.below(endpoints.size())];
      if (!take(target)) continue;
      if (chosen.size() < m && rng.uniform() < p_triad && !adj[target].empty()) {
        take(adj[target][rng.below(adj[target].size())]);
      }
    }
    for (NodeId t : chosen) link(node, t);
  }
  return Graph::from_edges(edges, n);
}

}  // namespace

Graph barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed) {
  return grow(n, m, 0.0, seed, "gen/ba");
}

Graph powerlaw_cluster(std::size_t n, std::size_t m, double p_triad, std::uint64_t seed) {
  return grow(n, m, p_triad, seed, "gen/plc");
}

}  // namespace sesample
