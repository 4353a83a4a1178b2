#include "sesample/heuristics.hpp"

#include <cmath>
#include <map>
#include <string>

#include "sesample/error.hpp"
#include "sesample/parallel.hpp"

namespace sesample {
namespace {

template <typename Visit>
void for_each_common(const Graph& g, NodeId u, NodeId v, Visit&& visit) {
  const auto a = g.neighbors(u);
  const auto b = g.neighbors(v);
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      visit(a[i]);
      ++i;
      ++j;
    }
  }
}

}  // namespace

std::string_view to_string(HeuristicKind k) noexcept {
  switch (k) {
    case HeuristicKind::CommonNeighbors: return "CN";
    case HeuristicKind::AdamicAdar: return "AA";
    case HeuristicKind::PersonalizedPageRank: return "PPR";
  }
  return "?";
}

std::optional<HeuristicKind> parse_heuristic(std::string_view s) noexcept {
  if (s == "CN" || s == "cn") return HeuristicKind::CommonNeighbors;
  if (s == "AA" || s == "aa") return HeuristicKind::AdamicAdar;
  if (s == "PPR" || s == "ppr") return HeuristicKind::PersonalizedPageRank;
  return std::nullopt;
}

void validate(const HeuristicConfig& cfg) {
  if (!(cfg.ppr_alpha > 0 && cfg.ppr_alpha < 1)) throw UsageError("ppr alpha must be in (0,1)");
  if (!(cfg.ppr_tol > 0)) throw UsageError("ppr tolerance must be > 0");
  if (cfg.ppr_max_iter < 1) throw UsageError("ppr iteration cap must be >= 1");
}

std::size_t common_neighbors(const Graph& g, NodeId u, NodeId v) {
  std::size_t count = 0;
  for_each_common(g, u, v, [&](NodeId) { ++count; });
  return count;
}

double adamic_adar(const Graph& g, NodeId u, NodeId v) {
  double score = 0.0;
  for_each_common(g, u, v, [&](NodeId w) {
    const std::size_t d = g.degree(w);
    if (d > 1) score += 1.0 / std::log(static_cast<double>(d));
  });
  return score;
}

std::vector<double> ppr_vector(const Graph& g, NodeId source, double alpha, double tol,
                               int max_iter) {
  const std::size_t n = g.num_nodes();
  if (source >= n) throw DataError("ppr source out of range");
  std::vector<double> pi(n, 0.0), next(n, 0.0);
  pi[source] = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    double dangling = 0.0;
    for (NodeId x = 0; x < n; ++x) {
      if (pi[x] == 0.0) continue;
      const auto nbrs = g.neighbors(x);
      if (nbrs.empty()) {
        dangling += pi[x];
        continue;
      }
      const double share = alpha * pi[x] / static_cast<double>(nbrs.size());
      for (NodeId y : nbrs) next[y] += share;
    }
    next[source] += (1.0 - alpha) + alpha * dangling;
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - pi[i]);
    pi.swap(next);
    if (change < tol) return pi;
  }
  throw DataError("personalized PageRank did not converge within " +
                  std::to_string(max_iter) + " iterations (tol " + std::to_string(tol) + ")");
}

double ppr_score(const Graph& g, NodeId u, NodeId v, double alpha, double tol, int max_iter) {
  if (v >= g.num_nodes()) throw DataError("ppr target out of range");
  return ppr_vector(g, u, alpha, tol, max_iter)[v] + ppr_vector(g, v, alpha, tol, max_iter)[u];
}

std::vector<double> score_instances(const Graph& g, const std::vector<LinkInstance>& instances,
                                    const HeuristicConfig& cfg, unsigned threads) {
  validate(cfg);
  for (const auto& inst : instances) {
    if (inst.u >= g.num_nodes() || inst.v >= g.num_nodes()) {
      throw DataError("instance (" + std::to_string(inst.u) + "," + std::to_string(inst.v) +
                      ") out of range");
    }
  }
  std::vector<double> scores(instances.size());
  if (cfg.kind != HeuristicKind::PersonalizedPageRank) {
    parallel_for(instances.size(), threads, [&](std::size_t i) {
      const auto& inst = instances[i];
      scores[i] = cfg.kind == HeuristicKind::CommonNeighbors
                      ? static_cast<double>(common_neighbors(g, inst.u, inst.v))
                      : adamic_adar(g, inst.u, inst.v);
    });
    return scores;
  }

  // Each distinct source's PPR vector is computed once.
  std::map<NodeId, std::size_t> slot;
  for (const auto& inst : instances) {
    slot.try_emplace(inst.u, 0);
    slot.try_emplace(inst.v, 0);
  }
  std::vector<NodeId> sources;
  for (auto& [node, idx] : slot) {
    idx = sources.size();
    sources.push_back(node);
  }
  std::vector<std::vector<double>> vectors(sources.size());
  parallel_for(sources.size(), threads, [&](std::size_t i) {
    vectors[i] = ppr_vector(g, sources[i], cfg.ppr_alpha, cfg.ppr_tol, cfg.ppr_max_iter);
  });
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    scores[i] = vectors[slot.at(inst.u)][inst.v] + vectors[slot.at(inst.v)][inst.u];
  }
  return scores;
}

}  // namespace sesample
