#include "sesample/split.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "sesample/error.hpp"
#include "sesample/rng.hpp"

namespace sesample {

std::string_view to_string(Split s) noexcept {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "?";
}

std::optional<Split> parse_split(std::string_view s) noexcept {
  if (s == "train") return Split::Train;
  if (s == "val") return Split::Val;
  if (s == "test") return Split::Test;
  return std::nullopt;
}

void validate_ratios(const SplitRatios& r) {
  if (!(r.train > 0 && r.val > 0 && r.test > 0)) {
    throw UsageError("split ratios must all be positive");
  }
  if (std::abs(r.train + r.val + r.test - 1.0) > 1e-9) {
    throw UsageError("split ratios must sum to 1 (got " +
                     std::to_string(r.train + r.val + r.test) + ")");
  }
}

std::vector<LinkInstance> SplitSet::of(Split s) const {
  std::vector<LinkInstance> out;
  for (const auto& inst : instances) {
    if (inst.split == s) out.push_back(inst);
  }
  return out;
}

Graph observed_graph(const std::vector<LinkInstance>& instances, std::size_t num_nodes,
                     std::optional<Matrix> features) {
  std::vector<Edge> train_pos;
  for (const auto& inst : instances) {
    if (inst.split == Split::Train && inst.label == 1) train_pos.push_back({inst.u, inst.v});
  }
  return Graph::from_edges(train_pos, num_nodes, std::move(features));
}

std::vector<Edge> sample_negatives(const Graph& g, std::size_t count, std::uint64_t seed,
                                   const PairSet& exclusions) {
  if (count == 0) return {};
  const std::uint64_t n = g.num_nodes();
  const std::uint64_t all_pairs = n * (n - 1) / 2;
  if (n < 2) throw DataError("negative sampling needs at least two nodes");

  std::uint64_t blocked = g.num_edges();
  for (std::uint64_t key : exclusions) {
    const auto a = static_cast<NodeId>(key >> 32);
    const auto b = static_cast<NodeId>(key & 0xffffffffu);
    if (a != b && a < n && b < n && !g.has_edge(a, b)) ++blocked;
  }
  const std::uint64_t available = all_pairs - blocked;
  if (count > available) {
    throw DataError("negative sampling: requested " + std::to_string(count) +
                    " non-edges but only " + std::to_string(available) + " exist");
  }

  Rng rng(derive_key(seed, "negatives"));
  std::vector<Edge> out;
  out.reserve(count);

  if (2 * blocked > all_pairs) {
    std::vector<Edge> candidates;
    candidates.reserve(available);
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = a + 1; b < n; ++b) {
        if (!g.has_edge(a, b) && !exclusions.contains(pair_key(a, b))) {
          candidates.push_back({a, b});
        }
      }
    }
    // Partial Fisher–Yates: the first `count` slots become a uniform sample.
    for (std::size_t i = 0; i < count; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(candidates.size() - i));
      std::swap(candidates[i], candidates[j]);
      out.push_back(candidates[i]);
    }
    return out;
  }

  PairSet drawn;
  drawn.reserve(count * 2);
  while (out.size() < count) {
    auto a = static_cast<NodeId>(rng.below(n));
    auto b = static_cast<NodeId>(rng.below(n));
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    const auto key = pair_key(a, b);
    if (g.has_edge(a, b) || exclusions.contains(key) || drawn.contains(key)) continue;
    drawn.insert(key);
    out.push_back({a, b});
  }
  return out;
}

SplitSet split_edges(const Graph& g, const SplitRatios& ratios, std::uint64_t seed) {
  validate_ratios(ratios);
  std::vector<Edge> edges = g.edges();
  if (edges.empty()) throw DataError("cannot split a graph with zero edges");

  Rng shuffle_rng(derive_key(seed, "split/shuffle"));
  shuffle(edges, shuffle_rng);

  const std::size_t m = edges.size();
  // The epsilon keeps exact products such as 0.85*100 from flooring to 84.
  const auto n_train = static_cast<std::size_t>(std::floor(ratios.train * m + 1e-9));
  const auto n_val = static_cast<std::size_t>(std::floor(ratios.val * m + 1e-9));
  if (n_train + n_val > m) throw InvariantError("split sizes exceed edge count");
  const std::size_t n_test = m - n_train - n_val;

  const std::vector<Edge> negatives =
      sample_negatives(g, m, derive_key(seed, "split/negatives"));

  SplitSet out;
  out.seed = seed;
  out.instances.reserve(2 * m);
  const std::size_t bounds[3] = {n_train, n_train + n_val, n_train + n_val + n_test};
  const Split tags[3] = {Split::Train, Split::Val, Split::Test};
  std::size_t begin = 0;
  for (int s = 0; s < 3; ++s) {
    for (std::size_t i = begin; i < bounds[s]; ++i) {
      out.instances.push_back({edges[i].u, edges[i].v, 1, tags[s]});
    }
    for (std::size_t i = begin; i < bounds[s]; ++i) {
      out.instances.push_back({negatives[i].u, negatives[i].v, 0, tags[s]});
    }
    begin = bounds[s];
  }
  out.observed = observed_graph(out.instances, g.num_nodes(), g.features());
  return out;
}

void write_splits(const SplitSet& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << "# sesample-splits v1 seed=" << s.seed << '\n';
  for (const auto& inst : s.instances) {
    out << inst.u << ' ' << inst.v << ' ' << inst.label << ' ' << to_string(inst.split)
        << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

SplitSet read_splits(const std::filesystem::path& path,
                     std::optional<std::size_t> num_nodes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());

  auto fail = [&](std::size_t line, const std::string& what) -> DataError {
    return DataError(path.string() + ":" + std::to_string(line) + ": " + what);
  };

  SplitSet out;
  std::string raw;
  std::size_t line = 0;
  bool header_seen = false;
  NodeId max_id = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty()) continue;
    if (raw.front() == '#') {
      const std::string prefix = "# sesample-splits v1 seed=";
      if (!header_seen && raw.starts_with(prefix)) {
        try {
          std::size_t used = 0;
          const std::string digits = raw.substr(prefix.size());
          out.seed = std::stoull(digits, &used);
          if (used != digits.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
          throw fail(line, "bad seed in header");
        }
        header_seen = true;
      }
      continue;
    }
    std::istringstream fields(raw);
    std::int64_t u = -1, v = -1;
    std::string label, split, extra;
    if (!(fields >> u >> v >> label >> split) || (fields >> extra)) {
      throw fail(line, "expected 'u v label split'");
    }
    if (u < 0 || v < 0 || u > 0xffffffffLL || v > 0xffffffffLL) {
      throw fail(line, "node id out of range");
    }
    if (u == v) throw fail(line, "self-pair " + std::to_string(u));
    if (label != "0" && label != "1") {
      throw fail(line, "label '" + label + "' is not 0 or 1");
    }
    const auto tag = parse_split(split);
    if (!tag) throw fail(line, "unknown split '" + split + "'");
    const LinkInstance inst{static_cast<NodeId>(u), static_cast<NodeId>(v),
                            label == "1" ? 1 : 0, *tag};
    max_id = std::max({max_id, inst.u, inst.v});
    out.instances.push_back(inst);
  }
  if (!header_seen) throw fail(1, "missing '# sesample-splits v1 seed=<S>' header");

  std::size_t n = num_nodes.value_or(out.instances.empty() ? 0 : max_id + 1);
  if (!out.instances.empty() && max_id >= n) {
    throw DataError(path.string() + ": node id " + std::to_string(max_id) +
                    " exceeds graph size " + std::to_string(n));
  }
  out.observed = observed_graph(out.instances, n);
  return out;
}

}  // namespace sesample
