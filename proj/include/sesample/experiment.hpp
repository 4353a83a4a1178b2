#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sesample/drnl.hpp"
#include "sesample/extract.hpp"
#include "sesample/graph.hpp"
#include "sesample/heuristics.hpp"
#include "sesample/model.hpp"
#include "sesample/split.hpp"

namespace sesample {

struct SubgraphProfile {
  double avg_nodes = 0.0;
  double avg_edges = 0.0;
};

/// Mean local node and undirected edge counts. Throws DataError if empty.
SubgraphProfile profile_samples(std::span<const SubgraphSample> samples);

struct Dataset {
  std::string name;
  Graph graph;
};

enum class MethodKind : std::uint8_t { Heuristic, Learned, ProfileOnly };

/// What to run for each seed. The extraction and model seeds are replaced by
/// the run seed; model.sortpool_k <= 0 selects the quantile policy.
struct MethodSpec {
  MethodKind kind = MethodKind::Learned;
  HeuristicConfig heuristic;
  ExtractionConfig extraction;
  LabelScheme labels = LabelScheme::Drnl;
  ModelConfig model;
  SplitRatios ratios;

  /// "CN", "AA", "PPR", "gnn-rw", "gnn-bfs", "profile-rw", "profile-bfs".
  std::string name() const;
};

struct ExperimentOptions {
  unsigned threads = 1;
  bool record_runtime = true;  // false writes 0 runtimes for byte-stable reports
};

struct SeedResult {
  std::int64_t seed = 0;
  double auc = 0.0;  // NaN for profile-only runs
  double runtime_s = 0.0;
  double avg_nodes = 0.0;
  double avg_edges = 0.0;
  int label_cap = 0;
  int sortpool_k = 0;
  int best_epoch = -1;
};

struct ExperimentReport {
  std::string dataset;
  std::string method;
  int hops = 0;
  int walks = 0;
  std::vector<SeedResult> runs;
  double mean_auc = 0.0;
  double std_auc = 0.0;  // population standard deviation over seeds
  double mean_runtime_s = 0.0;
  double mean_nodes = 0.0;
  double mean_edges = 0.0;
  std::string config;  // resolved settings, "key=value" pairs
};

/// Runs split -> (extract -> label -> train -> test | heuristic score) for
/// every seed and aggregates. Subgraph statistics cover the training
/// subgraphs. Errors are rethrown as DataError prefixed with the seed.
ExperimentReport run_experiment(const Dataset& data, const MethodSpec& method,
                                std::span<const std::uint64_t> seeds,
                                const ExperimentOptions& options = {});

/// One report per (h, k) cell, ordered by h then k. For bfs and heuristic
/// methods k is still iterated but has no effect on extraction.
std::vector<ExperimentReport> sweep(const Dataset& data, const MethodSpec& method,
                                    std::span<const int> hops, std::span<const int> walks,
                                    std::span<const std::uint64_t> seeds,
                                    const ExperimentOptions& options = {});

/// Versioned TSV: "# sesample-report v1", a column header, then per-seed rows
/// followed by an aggregate row (seed = -1) for every report.
void write_report_tsv(std::ostream& out, std::span<const ExperimentReport> reports);

/// Plain-text summary of a report.
std::string format_report(const ExperimentReport& report);

}  // namespace sesample
