#pragma once

#include <cstdint>

#include "sesample/graph.hpp"

namespace sesample {

/// G(n, p): every pair independently with probability p.
Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed);

/// Preferential attachment: each new node links to m distinct existing nodes
/// chosen proportionally to degree, starting from a clique on m + 1 nodes.
Graph barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed);

/// Holme–Kim growth: like barabasi_albert, but after each preferential link
/// a triangle-closing link to a neighbor of the chosen target follows with
/// probability p_triad. Produces heavy-tailed degrees with high clustering.
Graph powerlaw_cluster(std::size_t n, std::size_t m, double p_triad, std::uint64_t seed);

}  // namespace sesample
