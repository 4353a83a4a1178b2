#include "sesample/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "sesample/error.hpp"
#include "sesample/metrics.hpp"

namespace sesample {
namespace {

std::string fmt(const char* spec, double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

struct Partition {
  std::vector<LabeledSubgraph> samples;
  std::vector<int> labels;
};

double test_auc(std::span<const double> scores, const std::vector<int>& labels) {
  std::vector<double> pos, neg;
  for (std::size_t i = 0; i < scores.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(scores[i]);
  return auc(pos, neg);
}

SeedResult run_seed(const Dataset& data, const MethodSpec& method, std::uint64_t seed,
                    const ExperimentOptions& options) {
  SeedResult r;
  r.seed = static_cast<std::int64_t>(seed);
  const SplitSet split = split_edges(data.graph, method.ratios, seed);
  const auto clock_start = std::chrono::steady_clock::now();

  if (method.kind == MethodKind::Heuristic) {
    const auto test = split.of(Split::Test);
    const auto scores = score_instances(split.observed, test, method.heuristic, options.threads);
    std::vector<int> labels;
    for (const auto& inst : test) labels.push_back(inst.label);
    r.auc = test_auc(scores, labels);
  } else {
    ExtractionConfig ecfg = method.extraction;
    ecfg.seed = seed;
    std::vector<SubgraphSample> samples =
        extract_batch(split.observed, split.instances, ecfg, options.threads);

    std::vector<SubgraphSample> train_only;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (split.instances[i].split == Split::Train) train_only.push_back(samples[i]);
    }
    const SubgraphProfile prof = profile_samples(train_only);
    r.avg_nodes = prof.avg_nodes;
    r.avg_edges = prof.avg_edges;

    if (method.kind == MethodKind::ProfileOnly) {
      r.auc = std::numeric_limits<double>::quiet_NaN();
    } else {
      std::vector<LabeledSubgraph> labeled =
          label_batch(std::move(samples), method.labels, options.threads);
      Partition parts[3];
      for (std::size_t i = 0; i < labeled.size(); ++i) {
        const auto& inst = split.instances[i];
        auto& part = parts[static_cast<int>(inst.split)];
        part.samples.push_back(std::move(labeled[i]));
        part.labels.push_back(inst.label);
      }
      auto& train_part = parts[static_cast<int>(Split::Train)];
      auto& val_part = parts[static_cast<int>(Split::Val)];
      auto& test_part = parts[static_cast<int>(Split::Test)];
      r.label_cap = choose_label_cap(train_part.samples);
      for (auto& part : parts) assemble_batch(part.samples, split.observed, r.label_cap, options.threads);

      ModelConfig mcfg = method.model;
      mcfg.seed = seed;
      if (mcfg.sortpool_k <= 0) mcfg.sortpool_k = choose_sortpool_k(train_part.samples);
      r.sortpool_k = mcfg.sortpool_k;

      const TrainResult trained =
          train(train_part.samples, train_part.labels, val_part.samples, val_part.labels, mcfg,
                options.threads);
      r.best_epoch = trained.history.best_epoch;
      const auto scores = predict_batch(trained.best, test_part.samples, mcfg, options.threads);
      r.auc = test_auc(scores, test_part.labels);
    }
  }

  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - clock_start;
  r.runtime_s = options.record_runtime ? elapsed.count() : 0.0;
  return r;
}

std::string describe(const MethodSpec& m) {
  std::ostringstream s;
  s << "method=" << m.name() << " ratios=" << m.ratios.train << ',' << m.ratios.val << ','
    << m.ratios.test;
  if (m.kind == MethodKind::Heuristic) {
    if (m.heuristic.kind == HeuristicKind::PersonalizedPageRank) {
      s << " ppr_alpha=" << m.heuristic.ppr_alpha << " ppr_tol=" << m.heuristic.ppr_tol
        << " ppr_max_iter=" << m.heuristic.ppr_max_iter;
    }
    return s.str();
  }
  s << " mode=" << to_string(m.extraction.mode) << " hops=" << m.extraction.hops;
  if (m.extraction.mode == ExtractionMode::RandomWalk) s << " walks=" << m.extraction.walks;
  if (m.kind == MethodKind::ProfileOnly) return s.str();
  s << " labels=" << to_string(m.labels) << " layers=";
  for (std::size_t i = 0; i < m.model.layer_dims.size(); ++i) {
    s << (i ? "," : "") << m.model.layer_dims[i];
  }
  s << " sortpool_k=" << (m.model.sortpool_k > 0 ? std::to_string(m.model.sortpool_k) : "auto(q0.6)")
    << " mlp_hidden=" << m.model.mlp_hidden << " dropout=" << m.model.dropout
    << " lr=" << m.model.lr << " batch=" << m.model.batch_size << " epochs=" << m.model.epochs
    << " init=glorot-uniform weight_decay=0 label_cap=auto(max-train,[10,100])";
  return s.str();
}

}  // namespace

SubgraphProfile profile_samples(std::span<const SubgraphSample> samples) {
  if (samples.empty()) throw DataError("profile_samples needs at least one sample");
  double nodes = 0.0, edges = 0.0;
  for (const auto& s : samples) {
    nodes += static_cast<double>(s.num_nodes());
    edges += static_cast<double>(s.num_edges());
  }
  const auto n = static_cast<double>(samples.size());
  return {nodes / n, edges / n};
}

std::string MethodSpec::name() const {
  switch (kind) {
    case MethodKind::Heuristic: return std::string(to_string(heuristic.kind));
    case MethodKind::Learned: return "gnn-" + std::string(to_string(extraction.mode));
    case MethodKind::ProfileOnly: return "profile-" + std::string(to_string(extraction.mode));
  }
  return "?";
}

ExperimentReport run_experiment(const Dataset& data, const MethodSpec& method,
                                std::span<const std::uint64_t> seeds,
                                const ExperimentOptions& options) {
  if (seeds.empty()) throw UsageError("run_experiment needs at least one seed");
  validate_ratios(method.ratios);
  if (method.kind == MethodKind::Heuristic) {
    validate(method.heuristic);
  } else {
    validate(method.extraction);
    if (method.kind == MethodKind::Learned) {
      ModelConfig probe = method.model;
      if (probe.sortpool_k <= 0) probe.sortpool_k = 1;
      validate(probe);
    }
  }

  ExperimentReport rep;
  rep.dataset = data.name;
  rep.method = method.name();
  if (method.kind != MethodKind::Heuristic) {
    rep.hops = method.extraction.hops;
    rep.walks = method.extraction.mode == ExtractionMode::RandomWalk ? method.extraction.walks : 0;
  }
  rep.config = describe(method);

  for (std::uint64_t seed : seeds) {
    try {
      rep.runs.push_back(run_seed(data, method, seed, options));
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      throw DataError("seed " + std::to_string(seed) + ": " + e.what());
    }
  }

  const auto n = static_cast<double>(rep.runs.size());
  for (const auto& r : rep.runs) {
    rep.mean_auc += r.auc / n;
    rep.mean_runtime_s += r.runtime_s / n;
    rep.mean_nodes += r.avg_nodes / n;
    rep.mean_edges += r.avg_edges / n;
  }
  double var = 0.0;
  for (const auto& r : rep.runs) var += (r.auc - rep.mean_auc) * (r.auc - rep.mean_auc) / n;
  rep.std_auc = std::sqrt(var);
  if (rep.runs.size() == 1) rep.std_auc = std::isnan(rep.mean_auc) ? rep.mean_auc : 0.0;
  return rep;
}

std::vector<ExperimentReport> sweep(const Dataset& data, const MethodSpec& method,
                                    std::span<const int> hops, std::span<const int> walks,
                                    std::span<const std::uint64_t> seeds,
                                    const ExperimentOptions& options) {
  if (hops.empty() || walks.empty()) throw UsageError("sweep grids must be nonempty");
  std::vector<ExperimentReport> out;
  for (int h : hops) {
    for (int k : walks) {
      MethodSpec cell = method;
      cell.extraction.hops = h;
      cell.extraction.walks = k;
      out.push_back(run_experiment(data, cell, seeds, options));
      if (method.kind == MethodKind::Heuristic) {
        out.back().hops = h;
        out.back().walks = k;
      }
    }
  }
  return out;
}

void write_report_tsv(std::ostream& out, std::span<const ExperimentReport> reports) {
  out << "# sesample-report v1\n";
  out << "dataset\tmethod\th\tk\tseed\tauc\truntime_s\tavg_nodes\tavg_edges\n";
  auto row = [&](const ExperimentReport& rep, std::int64_t seed, double a, double t, double nodes,
                 double edges) {
    out << rep.dataset << '\t' << rep.method << '\t' << rep.hops << '\t' << rep.walks << '\t'
        << seed << '\t' << fmt("%.6f", a) << '\t' << fmt("%.3f", t) << '\t'
        << fmt("%.4f", nodes) << '\t' << fmt("%.4f", edges) << '\n';
  };
  for (const auto& rep : reports) {
    for (const auto& r : rep.runs) row(rep, r.seed, r.auc, r.runtime_s, r.avg_nodes, r.avg_edges);
    row(rep, -1, rep.mean_auc, rep.mean_runtime_s, rep.mean_nodes, rep.mean_edges);
  }
}

std::string format_report(const ExperimentReport& rep) {
  std::ostringstream s;
  s << rep.dataset << " / " << rep.method;
  if (rep.hops > 0) s << " (h=" << rep.hops << ", k=" << rep.walks << ")";
  s << "\n  config: " << rep.config << '\n';
  for (const auto& r : rep.runs) {
    s << "  seed " << r.seed << ": auc=" << fmt("%.4f", r.auc) << " runtime=" << fmt("%.2f", r.runtime_s)
      << "s";
    if (r.avg_nodes > 0) {
      s << " nodes=" << fmt("%.1f", r.avg_nodes) << " edges=" << fmt("%.1f", r.avg_edges);
    }
    if (r.sortpool_k > 0) {
      s << " label_cap=" << r.label_cap << " sortpool_k=" << r.sortpool_k
        << " best_epoch=" << r.best_epoch + 1;
    }
    s << '\n';
  }
  s << "  mean auc=" << fmt("%.4f", rep.mean_auc) << " +/- " << fmt("%.4f", rep.std_auc)
    << " (" << rep.runs.size() << " seeds), mean runtime=" << fmt("%.2f", rep.mean_runtime_s) << "s\n";
  return s.str();
}

}  // namespace sesample
