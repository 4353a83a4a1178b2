#include "sesample/drnl.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>
#include <string>

#include "sesample/error.hpp"
#include "sesample/parallel.hpp"

namespace sesample {

std::string_view to_string(LabelScheme s) noexcept {
  return s == LabelScheme::Drnl ? "drnl" : "zero-one";
}

std::optional<LabelScheme> parse_label_scheme(std::string_view s) noexcept {
  if (s == "drnl") return LabelScheme::Drnl;
  if (s == "zero-one") return LabelScheme::ZeroOne;
  return std::nullopt;
}

int drnl_hash(int d_xu, int d_xv) {
  if (d_xu <= 0 || d_xv <= 0) {
    throw UsageError("drnl_hash needs positive distances, got (" + std::to_string(d_xu) +
                     "," + std::to_string(d_xv) + ")");
  }
  const int d = d_xu + d_xv;
  const int half_floor = d / 2;
  // ceil(d/2 - 1) == ceil((d - 2) / 2) == (d - 1) / 2 for d >= 2
  const int half_ceil_minus_one = (d - 1) / 2;
  return 1 + std::min(d_xu, d_xv) + half_floor * half_ceil_minus_one;
}

std::vector<int> isolated_distances(const Graph& g, NodeId source, NodeId blocked) {
  std::vector<int> dist(g.num_nodes(), -1);
  dist[source] = 0;
  std::deque<NodeId> queue{source};
  while (!queue.empty()) {
    const NodeId x = queue.front();
    queue.pop_front();
    for (NodeId y : g.neighbors(x)) {
      if (y == blocked || dist[y] >= 0) continue;
      dist[y] = dist[x] + 1;
      queue.push_back(y);
    }
  }
  return dist;
}

LabeledSubgraph label_subgraph(SubgraphSample s, LabelScheme scheme) {
  const std::size_t n = s.num_nodes();
  LabeledSubgraph out;
  out.labels.assign(n, 0);
  if (scheme == LabelScheme::Drnl) {
    const auto du = isolated_distances(s.local, s.u_local, s.v_local);
    const auto dv = isolated_distances(s.local, s.v_local, s.u_local);
    for (std::size_t i = 0; i < n; ++i) {
      if (du[i] > 0 && dv[i] > 0) out.labels[i] = drnl_hash(du[i], dv[i]);
    }
  }
  out.labels[s.u_local] = 1;
  out.labels[s.v_local] = 1;
  out.sample = std::move(s);
  return out;
}

Matrix assemble_node_input(const LabeledSubgraph& ls, const Graph& g, int label_cap) {
  if (label_cap < 1) throw UsageError("label_cap must be >= 1");
  if (ls.labels.size() != ls.sample.num_nodes()) {
    throw DataError("label count does not match subgraph size");
  }
  const std::size_t onehot = static_cast<std::size_t>(label_cap) + 1;
  const std::size_t feat = g.feat_dim();
  Matrix m(ls.sample.num_nodes(), onehot + feat);
  for (std::size_t i = 0; i < m.rows; ++i) {
    const int bucket = std::clamp(ls.labels[i], 0, label_cap);
    m(i, static_cast<std::size_t>(bucket)) = 1.0;
    if (feat > 0) {
      const auto row = g.feature_row(ls.sample.nodes[i]);
      if (row.size() != feat) throw DataError("feature dimension mismatch");
      std::copy(row.begin(), row.end(), m.row(i).begin() + static_cast<long>(onehot));
    }
  }
  return m;
}

int choose_label_cap(const std::vector<LabeledSubgraph>& training) {
  int max_label = 0;
  for (const auto& ls : training) {
    for (int l : ls.labels) max_label = std::max(max_label, l);
  }
  return std::clamp(max_label, 10, 100);
}

std::vector<LabeledSubgraph> label_batch(std::vector<SubgraphSample> samples,
                                         LabelScheme scheme, unsigned threads) {
  std::vector<LabeledSubgraph> out(samples.size());
  parallel_for(samples.size(), threads, [&](std::size_t i) {
    out[i] = label_subgraph(std::move(samples[i]), scheme);
  });
  return out;
}

void assemble_batch(std::vector<LabeledSubgraph>& batch, const Graph& g, int label_cap,
                    unsigned threads) {
  parallel_for(batch.size(), threads, [&](std::size_t i) {
    batch[i].node_input = assemble_node_input(batch[i], g, label_cap);
  });
}

void write_bundle(const std::vector<LabeledSubgraph>& samples,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << "# sesample-bundle v1\n";
  for (const auto& ls : samples) {
    const auto& s = ls.sample;
    out << "S " << s.num_nodes() << ' ' << s.num_edges() << ' ' << s.u_local << ' '
        << s.v_local << '\n';
    for (std::size_t i = 0; i < s.num_nodes(); ++i) {
      out << "N " << s.nodes[i] << ' ' << ls.labels[i] << '\n';
    }
    for (const Edge& e : s.local.edges()) out << "E " << e.u << ' ' << e.v << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<LabeledSubgraph> read_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  auto fail = [&](std::size_t line, const std::string& what) {
    return DataError(path.string() + ":" + std::to_string(line) + ": " + what);
  };

  std::vector<LabeledSubgraph> out;
  std::string raw;
  std::size_t line = 0;
  auto next_record = [&](std::string& rec) -> bool {
    while (std::getline(in, rec)) {
      ++line;
      if (!rec.empty() && rec.back() == '\r') rec.pop_back();
      if (rec.empty() || rec.front() == '#') continue;
      return true;
    }
    return false;
  };

  while (next_record(raw)) {
    std::istringstream hdr(raw);
    std::string tag;
    long long n = -1, m = -1, ul = -1, vl = -1;
    if (!(hdr >> tag >> n >> m >> ul >> vl) || tag != "S" || n < 2 || m < 0 || ul < 0 ||
        vl < 0 || ul >= n || vl >= n || ul == vl) {
      throw fail(line, "expected 'S n_local n_edges u_local v_local'");
    }
    LabeledSubgraph ls;
    ls.sample.nodes.resize(static_cast<std::size_t>(n));
    ls.labels.resize(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
      if (!next_record(raw)) throw fail(line, "truncated sample: missing node lines");
      std::istringstream rec(raw);
      long long gid = -1, label = -1;
      if (!(rec >> tag >> gid >> label) || tag != "N" || gid < 0 || label < 0) {
        throw fail(line, "expected 'N global_id label'");
      }
      ls.sample.nodes[static_cast<std::size_t>(i)] = static_cast<NodeId>(gid);
      ls.labels[static_cast<std::size_t>(i)] = static_cast<int>(label);
    }
    if (!std::is_sorted(ls.sample.nodes.begin(), ls.sample.nodes.end())) {
      throw fail(line, "node ids of a sample must be sorted");
    }
    std::vector<Edge> edges;
    for (long long i = 0; i < m; ++i) {
      if (!next_record(raw)) throw fail(line, "truncated sample: missing edge lines");
      std::istringstream rec(raw);
      long long a = -1, b = -1;
      if (!(rec >> tag >> a >> b) || tag != "E" || a < 0 || b < 0 || a >= n || b >= n ||
          a == b) {
        throw fail(line, "expected 'E a b' with local ids");
      }
      edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b)});
    }
    ls.sample.local = Graph::from_edges(edges, static_cast<std::size_t>(n));
    if (ls.sample.local.num_edges() != static_cast<std::size_t>(m)) {
      throw fail(line, "duplicate edges in sample");
    }
    ls.sample.u_local = static_cast<NodeId>(ul);
    ls.sample.v_local = static_cast<NodeId>(vl);
    ls.sample.source_edge_removed = !ls.sample.local.has_edge(ls.sample.u_local,
                                                              ls.sample.v_local);
    out.push_back(std::move(ls));
  }
  return out;
}

}  // namespace sesample
