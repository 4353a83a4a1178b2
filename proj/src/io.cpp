#include "sesample/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "sesample/error.hpp"
#include "sesample/rng.hpp"

namespace sesample {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::uint64_t parse_id(std::string_view tok, const std::filesystem::path& path,
                       std::size_t line) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw DataError(path.string() + ":" + std::to_string(line) +
                    ": expected a nonnegative integer node id, got '" +
                    std::string(tok) + "'");
  }
  return value;
}

double parse_real(std::string_view tok, const std::filesystem::path& path,
                  std::size_t line) {
  double value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw DataError(path.string() + ":" + std::to_string(line) +
                    ": expected a real number, got '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LoadedEdges read_edge_list(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  LoadedEdges out;
  std::unordered_map<std::uint64_t, NodeId> remap;
  auto dense = [&](std::uint64_t id) {
    auto [it, inserted] = remap.try_emplace(id, static_cast<NodeId>(out.original_ids.size()));
    if (inserted) out.original_ids.push_back(id);
    return it->second;
  };

  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto s = trim(raw);
    if (s.empty() || s.front() == '#') continue;
    const auto toks = split_ws(s);
    if (toks.size() != 2 && toks.size() != 3) {
      throw DataError(path.string() + ":" + std::to_string(line) +
                      ": expected 'u v' or 'u v weight', got " + std::to_string(toks.size()) +
                      " fields");
    }
    if (toks.size() == 3) parse_real(toks[2], path, line);  // weight is validated, then ignored
    const NodeId u = dense(parse_id(toks[0], path, line));
    const NodeId v = dense(parse_id(toks[1], path, line));
    out.edges.push_back({u, v});
  }
  return out;
}

Matrix read_features(const std::filesystem::path& path, const LoadedEdges& loaded) {
  std::unordered_map<std::uint64_t, NodeId> remap;
  for (NodeId i = 0; i < loaded.original_ids.size(); ++i) remap[loaded.original_ids[i]] = i;

  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  Matrix m;
  bool have_width = false;
  while (std::getline(in, raw)) {
    ++line;
    const auto s = trim(raw);
    if (s.empty() || s.front() == '#') continue;
    const auto toks = split_ws(s);
    if (toks.size() < 2) {
      throw DataError(path.string() + ":" + std::to_string(line) +
                      ": expected 'id x1 ... xd'");
    }
    const std::size_t width = toks.size() - 1;
    if (!have_width) {
      m = Matrix(loaded.num_nodes(), width);
      have_width = true;
    } else if (width != m.cols) {
      throw DataError(path.string() + ":" + std::to_string(line) + ": row has " +
                      std::to_string(width) + " features, expected " +
                      std::to_string(m.cols));
    }
    const auto id = parse_id(toks[0], path, line);
    const auto it = remap.find(id);
    if (it == remap.end()) {
      throw DataError(path.string() + ":" + std::to_string(line) + ": node " +
                      std::to_string(id) + " does not appear in the edge list");
    }
    for (std::size_t c = 0; c < width; ++c) {
      m(it->second, c) = parse_real(toks[c + 1], path, line);
    }
  }
  if (!have_width) throw DataError(path.string() + ": feature file has no rows");
  return m;
}

LoadedGraph load_graph(const std::filesystem::path& edges,
                       const std::filesystem::path& features) {
  LoadedEdges loaded = read_edge_list(edges);
  std::optional<Matrix> feats;
  if (!features.empty()) feats = read_features(features, loaded);
  LoadedGraph out;
  out.graph = Graph::from_edges(loaded.edges, loaded.num_nodes(), std::move(feats),
                                &out.stats);
  out.original_ids = std::move(loaded.original_ids);
  return out;
}

void write_id_map(const std::filesystem::path& path,
                  const std::vector<std::uint64_t>& original_ids) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << "# dense_id original_id\n";
  for (std::size_t i = 0; i < original_ids.size(); ++i) {
    out << i << ' ' << original_ids[i] << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

void write_edge_list(const std::filesystem::path& path, const Graph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
  if (!out) throw DataError("write failed: " + path.string());
}

std::string file_hash(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(bytes)));
  return buf;
}

}  // namespace sesample
