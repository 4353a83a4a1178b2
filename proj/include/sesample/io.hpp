#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sesample/graph.hpp"

namespace sesample {

/// An edge list read from text, with original ids remapped to dense ids in
/// order of first appearance. original_ids[i] is the file id of node i.
struct LoadedEdges {
  std::vector<Edge> edges;
  std::vector<std::uint64_t> original_ids;
  std::size_t num_nodes() const noexcept { return original_ids.size(); }
};

/// Parses "u v" lines (a third weight column is accepted and ignored); blank
/// lines and lines starting with '#' are skipped.
/// Throws DataError (with the line number) on malformed lines.
LoadedEdges read_edge_list(const std::filesystem::path& path);

/// Parses a feature file ("id x1 ... xd" per line, ids in the edge list's
/// original id space) into a matrix aligned with `loaded`. Nodes without a
/// row get zeros; rows for unknown ids or with inconsistent width throw.
Matrix read_features(const std::filesystem::path& path, const LoadedEdges& loaded);

/// Loads a graph (and optional features) and reports cleaning counts.
struct LoadedGraph {
  Graph graph;
  std::vector<std::uint64_t> original_ids;
  BuildStats stats;
};
LoadedGraph load_graph(const std::filesystem::path& edges,
                       const std::filesystem::path& features = {});

/// Writes "dense_id original_id" lines.
void write_id_map(const std::filesystem::path& path,
                  const std::vector<std::uint64_t>& original_ids);

/// Writes "u v" lines for every undirected edge of g (u < v).
void write_edge_list(const std::filesystem::path& path, const Graph& g);

/// FNV-1a hash of a file's bytes, as 16 hex digits.
std::string file_hash(const std::filesystem::path& path);

/// Opens a file for reading, throwing DataError if that fails.
std::string read_file(const std::filesystem::path& path);

}  // namespace sesample
