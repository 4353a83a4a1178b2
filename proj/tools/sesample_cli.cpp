// sesample command-line front end.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "sesample/drnl.hpp"
#include "sesample/error.hpp"
#include "sesample/experiment.hpp"
#include "sesample/extract.hpp"
#include "sesample/heuristics.hpp"
#include "sesample/io.hpp"
#include "sesample/metrics.hpp"
#include "sesample/model.hpp"
#include "sesample/parallel.hpp"
#include "sesample/split.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace sesample;

namespace {

constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

// Files are written under temporary names and renamed into place only when
// the whole command succeeded; anything left uncommitted is deleted.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}
  Outputs(const Outputs&) = delete;
  Outputs& operator=(const Outputs&) = delete;
  ~Outputs() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& [tmp, final_path] : files_) fs::remove(tmp, ec);
  }

  fs::path stage(const std::string& name) {
    fs::create_directories(dir_);
    const fs::path final_path = dir_ / name;
    fs::path tmp = final_path;
    tmp += ".tmp-" + std::to_string(::getpid());
    files_.emplace_back(tmp, final_path);
    names_.push_back(name);
    return tmp;
  }

  void commit() {
    for (const auto& [tmp, final_path] : files_) fs::rename(tmp, final_path);
    committed_ = true;
  }

  const std::vector<std::string>& names() const { return names_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<std::pair<fs::path, fs::path>> files_;
  std::vector<std::string> names_;
  bool committed_ = false;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Globals {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out_dir = ".";
  CLI::Option* seed_opt = nullptr;
};

// Manifest of one invocation. Everything except the "environment" block is a
// function of the inputs and flags.
class Manifest {
 public:
  Manifest(std::string command, const Globals& g) {
    doc_["tool"] = "sesample";
    doc_["version"] = kVersion;
    doc_["command"] = std::move(command);
    doc_["flags"] = json::object();
    doc_["seeds"] = json::array();
    doc_["inputs"] = json::object();
    doc_["outputs"] = json::array();
    doc_["results"] = json::object();
    doc_["environment"] = {{"threads", resolve_threads(g.threads)}, {"timestamp", ""}};
  }

  template <typename T>
  void flag(const std::string& name, const T& value) { doc_["flags"][name] = value; }
  void seed(std::uint64_t s) { doc_["seeds"].push_back(s); }
  template <typename T>
  void result(const std::string& name, const T& value) { doc_["results"][name] = value; }

  void input(const std::string& role, const fs::path& path) {
    if (path.empty()) return;
    doc_["inputs"][role] = {{"path", path.string()}, {"fnv1a64", file_hash(path)}};
  }

  void write(Outputs& out) {
    const fs::path path = out.stage(doc_["command"].get<std::string>() + ".manifest.json");
    for (const auto& name : out.names()) doc_["outputs"].push_back(name);
    doc_["environment"]["timestamp"] = utc_timestamp();
    std::ofstream f(path);
    f << doc_.dump(2) << '\n';
    if (!f) throw DataError("cannot write " + path.string());
  }

 private:
  json doc_;
};

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// ---- shared inputs ---------------------------------------------------------

struct GraphInput {
  std::string edges;
  std::string features;

  void add(CLI::App* app) {
    app->add_option("--edges", edges, "edge list, one \"u v\" pair per line")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--features", features, "node features, \"id x1 ... xd\" per line")
        ->check(CLI::ExistingFile);
  }

  LoadedGraph load(Manifest& m) const {
    m.input("edges", edges);
    m.input("features", features);
    return load_graph(edges, features);
  }
};

struct SplitInput {
  std::string path;

  void add(CLI::App* app) {
    app->add_option("--splits", path, "split file written by `split`")
        ->required()
        ->check(CLI::ExistingFile);
  }

  // Instances from the file, with the observed graph rebuilt on the full
  // node set and carrying the node features.
  SplitSet load(const Graph& full, Manifest& m) const {
    m.input("splits", path);
    SplitSet s = read_splits(path, full.num_nodes());
    s.observed = observed_graph(s.instances, full.num_nodes(), full.features());
    return s;
  }
};

struct ExtractFlags {
  std::string mode = "rw";
  int hops = 2;
  int walks = 20;
  std::string labels = "drnl";

  void add(CLI::App* app) {
    app->add_option("--mode", mode, "bfs (exact h-hop) or rw (random-walk sampled)")
        ->capture_default_str();
    app->add_option("--hops", hops, "BFS radius, or walk length in rw mode")->capture_default_str();
    app->add_option("--walks", walks, "walks per endpoint (rw only)")->capture_default_str();
    app->add_option("--labels", labels, "drnl or zero-one")->capture_default_str();
  }

  ExtractionConfig config(std::uint64_t seed) const {
    const auto m = parse_mode(mode);
    if (!m) throw UsageError("unknown --mode '" + mode + "' (expected bfs or rw)");
    ExtractionConfig cfg{*m, hops, walks, seed};
    validate(cfg);
    return cfg;
  }

  LabelScheme scheme() const {
    const auto s = parse_label_scheme(labels);
    if (!s) throw UsageError("unknown --labels '" + labels + "' (expected drnl or zero-one)");
    return *s;
  }

  void record(Manifest& m) const {
    m.flag("mode", mode);
    m.flag("hops", hops);
    if (mode == "rw") m.flag("walks", walks);
    m.flag("labels", labels);
  }
};

struct ModelFlags {
  std::vector<int> layers{32, 32, 32, 1};
  int sortpool_k = 0;
  int hidden = 128;
  double dropout = 0.5;
  double lr = 1e-4;
  int batch_size = 32;
  int epochs = 50;

  void add(CLI::App* app) {
    app->add_option("--layers", layers, "conv widths; the last must be 1")
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--sortpool-k", sortpool_k, "rows kept by SortPooling (0 = 0.6 quantile)")
        ->capture_default_str();
    app->add_option("--hidden", hidden, "MLP hidden width")->capture_default_str();
    app->add_option("--dropout", dropout, "dropout on the pooled vector")->capture_default_str();
    app->add_option("--lr", lr, "Adam learning rate")->capture_default_str();
    app->add_option("--batch-size", batch_size)->capture_default_str();
    app->add_option("--epochs", epochs)->capture_default_str();
  }

  ModelConfig config(std::uint64_t seed) const {
    ModelConfig cfg;
    cfg.layer_dims = layers;
    cfg.sortpool_k = sortpool_k;
    cfg.mlp_hidden = hidden;
    cfg.dropout = dropout;
    cfg.lr = lr;
    cfg.batch_size = batch_size;
    cfg.epochs = epochs;
    cfg.seed = seed;
    ModelConfig probe = cfg;
    if (probe.sortpool_k <= 0) probe.sortpool_k = 1;
    validate(probe);
    return cfg;
  }

  void record(Manifest& m) const {
    m.flag("layers", layers);
    m.flag("sortpool_k", sortpool_k);
    m.flag("hidden", hidden);
    m.flag("dropout", dropout);
    m.flag("lr", lr);
    m.flag("batch_size", batch_size);
    m.flag("epochs", epochs);
  }
};

void write_scores(const fs::path& path, const std::vector<LinkInstance>& instances,
                  const std::vector<double>& scores) {
  std::ofstream out(path);
  out << "# u v label split score\n";
  char buf[64];
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& x = instances[i];
    std::snprintf(buf, sizeof buf, "%.17g", scores[i]);
    out << x.u << ' ' << x.v << ' ' << x.label << ' ' << to_string(x.split) << ' ' << buf << '\n';
  }
  if (!out) throw DataError("cannot write " + path.string());
}

double auc_of(const std::vector<LinkInstance>& instances, const std::vector<double>& scores) {
  std::vector<double> pos, neg;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    (instances[i].label == 1 ? pos : neg).push_back(scores[i]);
  }
  return auc(pos, neg);
}

std::uint64_t effective_seed(const Globals& g, const SplitSet& s) {
  return g.seed_opt->count() > 0 ? g.seed : s.seed;
}

// ---- commands --------------------------------------------------------------

struct SplitCmd {
  GraphInput graph;
  std::vector<double> ratios{0.85, 0.05, 0.10};

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("split", "split edges into train/val/test with sampled negatives");
    graph.add(c);
    c->add_option("--ratios", ratios, "train,val,test fractions")
        ->delimiter(',')
        ->expected(3)
        ->capture_default_str();
  }

  void run(const Globals& g) const {
    Manifest m("split", g);
    const LoadedGraph lg = graph.load(m);
    if (ratios.size() != 3) throw UsageError("--ratios needs three values");
    const SplitRatios r{ratios[0], ratios[1], ratios[2]};
    validate_ratios(r);
    const SplitSet s = split_edges(lg.graph, r, g.seed);

    Outputs out(g.out_dir);
    write_splits(s, out.stage("splits.txt"));
    write_id_map(out.stage("id_map.txt"), lg.original_ids);
    m.flag("ratios", ratios);
    m.seed(g.seed);
    m.result("nodes", lg.graph.num_nodes());
    m.result("edges", lg.graph.num_edges());
    m.result("self_loops_dropped", lg.stats.self_loops_dropped);
    m.result("duplicates_collapsed", lg.stats.duplicates_collapsed);
    for (Split sp : {Split::Train, Split::Val, Split::Test}) {
      m.result(std::string(to_string(sp)) + "_instances", s.of(sp).size());
    }
    m.write(out);
    out.commit();
    std::cout << "split " << lg.graph.num_edges() << " edges over " << lg.graph.num_nodes()
              << " nodes: train " << s.of(Split::Train).size() << ", val "
              << s.of(Split::Val).size() << ", test " << s.of(Split::Test).size()
              << " instances (half positive)\n";
  }
};

struct ExtractCmd {
  GraphInput graph;
  SplitInput splits;
  ExtractFlags flags;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("extract", "extract and label enclosing subgraphs for every instance");
    graph.add(c);
    splits.add(c);
    flags.add(c);
  }

  void run(const Globals& g) const {
    Manifest m("extract", g);
    const ExtractionConfig probe = flags.config(0);
    const LabelScheme scheme = flags.scheme();
    const LoadedGraph lg = graph.load(m);
    const SplitSet s = splits.load(lg.graph, m);
    const std::uint64_t seed = effective_seed(g, s);
    ExtractionConfig cfg = probe;
    cfg.seed = seed;

    auto samples = extract_batch(s.observed, s.instances, cfg, g.threads);
    std::vector<SubgraphSample> train_only;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (s.instances[i].split == Split::Train) train_only.push_back(samples[i]);
    }
    const SubgraphProfile prof = profile_samples(train_only);
    const auto labeled = label_batch(std::move(samples), scheme, g.threads);

    Outputs out(g.out_dir);
    write_bundle(labeled, out.stage("bundle.txt"));
    flags.record(m);
    m.seed(seed);
    m.result("samples", labeled.size());
    m.result("train_avg_nodes", prof.avg_nodes);
    m.result("train_avg_edges", prof.avg_edges);
    m.write(out);
    out.commit();
    std::cout << "extracted " << labeled.size() << " subgraphs (" << to_string(cfg.mode)
              << ", h=" << cfg.hops;
    if (cfg.mode == ExtractionMode::RandomWalk) std::cout << ", k=" << cfg.walks;
    std::cout << "); training subgraphs average " << fixed(prof.avg_nodes, 2) << " nodes, "
              << fixed(prof.avg_edges, 2) << " edges\n";
  }
};

struct TrainCmd {
  GraphInput graph;
  SplitInput splits;
  ExtractFlags flags;
  ModelFlags model;
  std::string bundle;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("train", "train the subgraph classifier and score the test split");
    graph.add(c);
    splits.add(c);
    flags.add(c);
    model.add(c);
    c->add_option("--bundle", bundle, "reuse subgraphs from `extract` instead of extracting")
        ->check(CLI::ExistingFile);
  }

  std::vector<LabeledSubgraph> load_bundle(const SplitSet& s, Manifest& m) const {
    m.input("bundle", bundle);
    auto labeled = read_bundle(bundle);
    if (labeled.size() != s.instances.size()) {
      throw DataError("bundle has " + std::to_string(labeled.size()) + " samples but the split file has " +
                      std::to_string(s.instances.size()) + " instances");
    }
    for (std::size_t i = 0; i < labeled.size(); ++i) {
      const auto& smp = labeled[i].sample;
      const auto& inst = s.instances[i];
      if (smp.nodes[smp.u_local] != inst.u || smp.nodes[smp.v_local] != inst.v) {
        throw DataError("bundle sample " + std::to_string(i) + " does not match split instance " +
                        std::to_string(inst.u) + " " + std::to_string(inst.v));
      }
    }
    return labeled;
  }

  void run(const Globals& g) const {
    Manifest m("train", g);
    (void)flags.config(0);
    const LabelScheme scheme = flags.scheme();
    (void)model.config(0);
    const LoadedGraph lg = graph.load(m);
    const SplitSet s = splits.load(lg.graph, m);
    const std::uint64_t seed = effective_seed(g, s);

    std::vector<LabeledSubgraph> labeled;
    if (!bundle.empty()) {
      labeled = load_bundle(s, m);
    } else {
      labeled = label_batch(extract_batch(s.observed, s.instances, flags.config(seed), g.threads),
                            scheme, g.threads);
      flags.record(m);
    }

    std::vector<LabeledSubgraph> part[3];
    std::vector<int> ys[3];
    std::vector<LinkInstance> test_instances;
    for (std::size_t i = 0; i < labeled.size(); ++i) {
      const auto which = static_cast<int>(s.instances[i].split);
      part[which].push_back(std::move(labeled[i]));
      ys[which].push_back(s.instances[i].label);
      if (s.instances[i].split == Split::Test) test_instances.push_back(s.instances[i]);
    }
    const int tr = static_cast<int>(Split::Train), va = static_cast<int>(Split::Val),
              te = static_cast<int>(Split::Test);
    const int cap = choose_label_cap(part[tr]);
    for (auto& p : part) assemble_batch(p, s.observed, cap, g.threads);

    ModelConfig cfg = model.config(seed);
    if (cfg.sortpool_k <= 0) cfg.sortpool_k = choose_sortpool_k(part[tr]);
    const TrainResult result = train(part[tr], ys[tr], part[va], ys[va], cfg, g.threads);
    const auto scores = predict_batch(result.best, part[te], cfg, g.threads);
    const double test_auc = auc_of(test_instances, scores);

    Outputs out(g.out_dir);
    save_params(result.best, cfg, out.stage("model.ckpt"));
    {
      std::ofstream h(out.stage("history.tsv"));
      h << "epoch\tloss\tval_auc\n";
      for (std::size_t e = 0; e < result.history.loss.size(); ++e) {
        h << e + 1 << '\t' << fixed(result.history.loss[e], 6) << '\t'
          << fixed(result.history.val_auc[e], 6) << '\n';
      }
    }
    const std::string method = "gnn-" + flags.mode;
    write_scores(out.stage("scores_" + method + ".txt"), test_instances, scores);
    model.record(m);
    m.seed(seed);
    m.result("label_cap", cap);
    m.result("sortpool_k", cfg.sortpool_k);
    m.result("input_width", result.best.input_width);
    m.result("best_epoch", result.history.best_epoch + 1);
    m.result("test_auc", test_auc);
    m.write(out);
    out.commit();
    std::cout << method << ": test auc=" << fixed(test_auc, 6) << " (best epoch "
              << result.history.best_epoch + 1 << " of " << cfg.epochs << ", label_cap=" << cap
              << ", sortpool_k=" << cfg.sortpool_k << ")\n";
  }
};

struct HeuristicCmd {
  GraphInput graph;
  SplitInput splits;
  std::string method = "CN";
  HeuristicConfig hc;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("heuristic", "score the test split with CN, AA or PPR");
    graph.add(c);
    splits.add(c);
    c->add_option("--method", method, "CN, AA or PPR")->capture_default_str();
    c->add_option("--ppr-alpha", hc.ppr_alpha, "probability of following an edge")
        ->capture_default_str();
    c->add_option("--ppr-tol", hc.ppr_tol)->capture_default_str();
    c->add_option("--ppr-max-iter", hc.ppr_max_iter)->capture_default_str();
  }

  void run(const Globals& g) const {
    Manifest m("heuristic", g);
    const auto kind = parse_heuristic(method);
    if (!kind) throw UsageError("unknown --method '" + method + "' (expected CN, AA or PPR)");
    HeuristicConfig cfg = hc;
    cfg.kind = *kind;
    validate(cfg);
    const LoadedGraph lg = graph.load(m);
    const SplitSet s = splits.load(lg.graph, m);
    const auto test = s.of(Split::Test);
    const auto scores = score_instances(s.observed, test, cfg, g.threads);
    const double a = auc_of(test, scores);

    Outputs out(g.out_dir);
    write_scores(out.stage("scores_" + method + ".txt"), test, scores);
    m.flag("method", method);
    if (cfg.kind == HeuristicKind::PersonalizedPageRank) {
      m.flag("ppr_alpha", cfg.ppr_alpha);
      m.flag("ppr_tol", cfg.ppr_tol);
      m.flag("ppr_max_iter", cfg.ppr_max_iter);
    }
    m.seed(s.seed);
    m.result("test_auc", a);
    m.write(out);
    out.commit();
    std::cout << method << ": test auc=" << fixed(a, 6) << " over " << test.size()
              << " instances\n";
  }
};

struct EvalCmd {
  std::string scores;
  std::string split = "test";

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("eval", "AUC of a scores file");
    c->add_option("--scores", scores, "\"u v label split score\" lines")
        ->required()
        ->check(CLI::ExistingFile);
    c->add_option("--split", split, "train, val, test or all")->capture_default_str();
  }

  void run(const Globals& g) const {
    Manifest m("eval", g);
    std::optional<Split> only;
    if (split != "all") {
      only = parse_split(split);
      if (!only) throw UsageError("unknown --split '" + split + "'");
    }
    m.input("scores", scores);
    std::ifstream in(scores);
    std::vector<double> pos, neg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      std::uint64_t u = 0, v = 0;
      int label = -1;
      std::string sp;
      double score = 0.0;
      if (!(ls >> u >> v >> label >> sp >> score) || (label != 0 && label != 1) ||
          !parse_split(sp)) {
        throw DataError(scores + ":" + std::to_string(lineno) +
                        ": expected \"u v label split score\"");
      }
      if (only && parse_split(sp) != only) continue;
      (label == 1 ? pos : neg).push_back(score);
    }
    const double a = auc(pos, neg);

    Outputs out(g.out_dir);
    {
      std::ofstream f(out.stage("eval.tsv"));
      f << "scores\tsplit\tpositives\tnegatives\tauc\n"
        << fs::path(scores).filename().string() << '\t' << split << '\t' << pos.size() << '\t'
        << neg.size() << '\t' << fixed(a, 6) << '\n';
    }
    m.flag("split", split);
    m.result("auc", a);
    m.write(out);
    out.commit();
    std::cout << "auc=" << fixed(a, 6) << " (" << pos.size() << " positive, " << neg.size()
              << " negative)\n";
  }
};

// Shared by sweep and profile: multi-seed experiments over a dataset.
struct ExperimentFlags {
  GraphInput graph;
  std::vector<std::uint64_t> seeds;
  std::string name;
  bool no_runtime = false;
  std::vector<double> ratios{0.85, 0.05, 0.10};

  void add(CLI::App* c) {
    graph.add(c);
    c->add_option("--seeds", seeds, "comma-separated seeds (default: --seed)")->delimiter(',');
    c->add_option("--name", name, "dataset name in reports (default: edge file stem)");
    c->add_flag("--no-runtime", no_runtime, "write 0 runtimes so reports are byte-stable");
    c->add_option("--ratios", ratios, "train,val,test fractions")
        ->delimiter(',')
        ->expected(3)
        ->capture_default_str();
  }

  std::vector<std::uint64_t> resolved_seeds(const Globals& g) const {
    return seeds.empty() ? std::vector<std::uint64_t>{g.seed} : seeds;
  }

  Dataset load(Manifest& m) const {
    LoadedGraph lg = graph.load(m);
    return {name.empty() ? fs::path(graph.edges).stem().string() : name, std::move(lg.graph)};
  }

  SplitRatios split_ratios() const {
    if (ratios.size() != 3) throw UsageError("--ratios needs three values");
    return {ratios[0], ratios[1], ratios[2]};
  }

  void record(Manifest& m, const std::vector<std::uint64_t>& s) const {
    for (auto x : s) m.seed(x);
    m.flag("ratios", ratios);
    m.flag("no_runtime", no_runtime);
  }
};

void write_reports(Outputs& out, const std::string& name, const std::vector<ExperimentReport>& reps) {
  std::ofstream f(out.stage(name));
  write_report_tsv(f, reps);
  if (!f) throw DataError("cannot write " + name);
}

json summarize(const std::vector<ExperimentReport>& reps) {
  json cells = json::array();
  for (const auto& r : reps) {
    json c = {{"method", r.method}, {"h", r.hops}, {"k", r.walks}, {"config", r.config}};
    if (!std::isnan(r.mean_auc)) {
      c["mean_auc"] = r.mean_auc;
      c["std_auc"] = r.std_auc;
    }
    if (r.mean_nodes > 0) {
      c["mean_nodes"] = r.mean_nodes;
      c["mean_edges"] = r.mean_edges;
    }
    cells.push_back(std::move(c));
  }
  return cells;
}

struct SweepCmd {
  ExperimentFlags exp;
  ExtractFlags flags;
  ModelFlags model;
  HeuristicConfig hc;
  std::string method = "gnn";
  std::vector<int> hops_list{2};
  std::vector<int> walks_list{1, 5, 20};

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("sweep", "multi-seed experiments over an (h, k) grid");
    exp.add(c);
    flags.add(c);
    model.add(c);
    c->add_option("--method", method, "gnn, profile, CN, AA or PPR")->capture_default_str();
    c->add_option("--hops-list", hops_list, "h values")->delimiter(',')->capture_default_str();
    c->add_option("--walks-list", walks_list, "k values")->delimiter(',')->capture_default_str();
    c->add_option("--ppr-alpha", hc.ppr_alpha)->capture_default_str();
    c->add_option("--ppr-tol", hc.ppr_tol)->capture_default_str();
  }

  MethodSpec spec() const {
    MethodSpec s;
    s.ratios = exp.split_ratios();
    s.extraction = flags.config(0);
    s.labels = flags.scheme();
    if (method == "gnn") {
      s.kind = MethodKind::Learned;
      s.model = model.config(0);
    } else if (method == "profile") {
      s.kind = MethodKind::ProfileOnly;
    } else if (const auto k = parse_heuristic(method)) {
      s.kind = MethodKind::Heuristic;
      s.heuristic = hc;
      s.heuristic.kind = *k;
    } else {
      throw UsageError("unknown --method '" + method + "' (expected gnn, profile, CN, AA or PPR)");
    }
    return s;
  }

  void run(const Globals& g) const {
    Manifest m("sweep", g);
    const MethodSpec s = spec();
    if (hops_list.empty() || walks_list.empty()) throw UsageError("empty --hops-list or --walks-list");
    const auto seeds = exp.resolved_seeds(g);
    const Dataset data = exp.load(m);
    const auto reps = sweep(data, s, hops_list, walks_list, seeds, {g.threads, !exp.no_runtime});

    Outputs out(g.out_dir);
    write_reports(out, "report.tsv", reps);
    exp.record(m, seeds);
    m.flag("method", method);
    m.flag("hops_list", hops_list);
    m.flag("walks_list", walks_list);
    flags.record(m);
    if (s.kind == MethodKind::Learned) model.record(m);
    m.result("cells", summarize(reps));
    m.write(out);
    out.commit();
    for (const auto& r : reps) std::cout << format_report(r);
  }
};

struct ProfileCmd {
  ExperimentFlags exp;
  std::string mode = "both";
  int hops = 2;
  int walks = 20;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("profile", "average training-subgraph sizes per extraction mode");
    exp.add(c);
    c->add_option("--mode", mode, "bfs, rw or both")->capture_default_str();
    c->add_option("--hops", hops)->capture_default_str();
    c->add_option("--walks", walks)->capture_default_str();
  }

  void run(const Globals& g) const {
    Manifest m("profile", g);
    std::vector<ExtractionMode> modes;
    if (mode == "both") {
      modes = {ExtractionMode::RandomWalk, ExtractionMode::Bfs};
    } else if (const auto pm = parse_mode(mode)) {
      modes = {*pm};
    } else {
      throw UsageError("unknown --mode '" + mode + "' (expected bfs, rw or both)");
    }
    const auto seeds = exp.resolved_seeds(g);
    std::vector<MethodSpec> specs;
    for (auto md : modes) {
      MethodSpec s;
      s.kind = MethodKind::ProfileOnly;
      s.ratios = exp.split_ratios();
      s.extraction = {md, hops, walks, 0};
      validate(s.extraction);
      specs.push_back(s);
    }
    const Dataset data = exp.load(m);
    std::vector<ExperimentReport> reps;
    for (const auto& s : specs) {
      reps.push_back(run_experiment(data, s, seeds, {g.threads, !exp.no_runtime}));
    }

    Outputs out(g.out_dir);
    write_reports(out, "profile.tsv", reps);
    exp.record(m, seeds);
    m.flag("mode", mode);
    m.flag("hops", hops);
    m.flag("walks", walks);
    m.result("cells", summarize(reps));
    m.write(out);
    out.commit();
    for (const auto& r : reps) {
      std::cout << r.method << " h=" << r.hops << (r.walks ? " k=" + std::to_string(r.walks) : "")
                << ": avg nodes " << fixed(r.mean_nodes, 2) << ", avg edges "
                << fixed(r.mean_edges, 2) << '\n';
    }
    if (reps.size() == 2 && reps[0].mean_nodes > 0 && reps[0].mean_edges > 0) {
      std::cout << "bfs/rw: nodes " << fixed(reps[1].mean_nodes / reps[0].mean_nodes, 2)
                << "x, edges " << fixed(reps[1].mean_edges / reps[0].mean_edges, 2) << "x\n";
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sesample: link prediction on sampled enclosing subgraphs"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string("sesample ") + kVersion);

  Globals g;
  g.seed_opt = app.add_option("--seed", g.seed, "root seed (default 0; extract/train default to the split seed)");
  app.add_option("--threads", g.threads, "worker threads, 0 = all cores")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "directory for outputs")->capture_default_str();

  SplitCmd split_cmd;
  ExtractCmd extract_cmd;
  TrainCmd train_cmd;
  HeuristicCmd heuristic_cmd;
  EvalCmd eval_cmd;
  SweepCmd sweep_cmd;
  ProfileCmd profile_cmd;
  split_cmd.add(app);
  extract_cmd.add(app);
  train_cmd.add(app);
  heuristic_cmd.add(app);
  eval_cmd.add(app);
  sweep_cmd.add(app);
  profile_cmd.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "split") split_cmd.run(g);
    else if (cmd == "extract") extract_cmd.run(g);
    else if (cmd == "train") train_cmd.run(g);
    else if (cmd == "heuristic") heuristic_cmd.run(g);
    else if (cmd == "eval") eval_cmd.run(g);
    else if (cmd == "sweep") sweep_cmd.run(g);
    else if (cmd == "profile") profile_cmd.run(g);
    return kOk;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\nrun with --help for usage\n";
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const InvariantError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}
