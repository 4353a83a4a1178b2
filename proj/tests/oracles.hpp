#pragma once

// Independent reference computations used only by tests. None of these call
// into the code paths they check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sesample/graph.hpp"
#include "sesample/matrix.hpp"

namespace sesample::oracle {

inline constexpr int kInf = std::numeric_limits<int>::max() / 4;

/// Floyd–Warshall over g with `removed` deleted (pass num_nodes() for none).
inline std::vector<std::vector<int>> all_pairs(const Graph& g, std::size_t removed) {
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) {
    if (i == removed) continue;
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != removed && i != j && g.has_edge(static_cast<NodeId>(i), static_cast<NodeId>(j))) {
        d[i][j] = 1;
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
      }
    }
  }
  return d;
}

/// Label formula evaluated literally in floating point.
inline int drnl_literal(int a, int b) {
  const double d = a + b;
  return static_cast<int>(1 + std::min(a, b) + std::floor(d / 2.0) * std::ceil(d / 2.0 - 1.0));
}

/// (wins + 0.5 * ties) / (|pos| * |neg|) by full pairwise comparison.
inline double pairwise_auc(const std::vector<double>& pos, const std::vector<double>& neg) {
  double wins = 0.0, ties = 0.0;
  for (double p : pos) {
    for (double q : neg) {
      if (p > q) wins += 1.0;
      else if (p == q) ties += 1.0;
    }
  }
  return (wins + 0.5 * ties) / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

/// Solves a dense linear system by Gaussian elimination with partial pivoting.
inline std::vector<double> solve(Matrix a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    }
    for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

/// Stationary personalized PageRank: pi = (1-alpha) e_s + alpha (P^T pi)
/// + alpha * (mass on isolated nodes) e_s, solved directly.
inline std::vector<double> ppr_dense(const Graph& g, NodeId s, double alpha) {
  const std::size_t n = g.num_nodes();
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = 1.0;
  for (NodeId x = 0; x < n; ++x) {
    const auto deg = g.degree(x);
    if (deg == 0) {
      a(s, x) -= alpha;
      continue;
    }
    for (NodeId y : g.neighbors(x)) a(y, x) -= alpha / static_cast<double>(deg);
  }
  std::vector<double> b(n, 0.0);
  b[s] = 1.0 - alpha;
  return solve(a, b);
}

}  // namespace sesample::oracle
