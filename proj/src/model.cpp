#include "sesample/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "sesample/error.hpp"
#include "sesample/metrics.hpp"
#include "sesample/parallel.hpp"

namespace sesample {
namespace {

constexpr char kMagic[8] = {'S', 'E', 'S', 'M', 'P', 'C', 'K', '1'};

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// out = a * b, a: n x p, b: p x q
Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    double* o = out.data.data() + i * out.cols;
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double s = a(i, k);
      if (s == 0.0) continue;
      const double* br = b.data.data() + k * b.cols;
      for (std::size_t j = 0; j < b.cols; ++j) o[j] += s * br[j];
    }
  }
  return out;
}

// out += a^T * b, a: n x p, b: n x q, out: p x q
void add_matmul_tn(const Matrix& a, const Matrix& b, Matrix& out) {
  for (std::size_t r = 0; r < a.rows; ++r) {
    for (std::size_t i = 0; i < a.cols; ++i) {
      const double s = a(r, i);
      if (s == 0.0) continue;
      double* o = out.data.data() + i * out.cols;
      const double* br = b.data.data() + r * b.cols;
      for (std::size_t j = 0; j < b.cols; ++j) o[j] += s * br[j];
    }
  }
}

// out += a * b^T, a: n x q, b: p x q, out: n x p
void add_matmul_nt(const Matrix& a, const Matrix& b, Matrix& out) {
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* ar = a.data.data() + i * a.cols;
    for (std::size_t j = 0; j < b.rows; ++j) {
      const double* br = b.data.data() + j * b.cols;
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols; ++k) s += ar[k] * br[k];
      out(i, j) += s;
    }
  }
}

void write_u64(std::ostream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

bool read_u64(std::istream& in, std::uint64_t& v) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8)) return false;
  v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return true;
}

}  // namespace

int ModelConfig::concat_width() const {
  return std::accumulate(layer_dims.begin(), layer_dims.end(), 0);
}

void validate(const ModelConfig& cfg) {
  if (cfg.layer_dims.empty()) throw UsageError("model needs at least one conv layer");
  for (int d : cfg.layer_dims) {
    if (d < 1) throw UsageError("layer dimensions must be >= 1");
  }
  if (cfg.layer_dims.back() != 1) throw UsageError("final conv layer must have width 1");
  if (cfg.sortpool_k < 1) throw UsageError("sortpool_k must be >= 1");
  if (cfg.mlp_hidden < 1) throw UsageError("mlp_hidden must be >= 1");
  if (!(cfg.dropout >= 0.0 && cfg.dropout < 1.0)) throw UsageError("dropout must be in [0,1)");
  if (!(cfg.lr >= 0.0)) throw UsageError("learning rate must be >= 0");
  if (cfg.batch_size < 1) throw UsageError("batch size must be >= 1");
  if (cfg.epochs < 0) throw UsageError("epochs must be >= 0");
}

int choose_sortpool_k(std::span<const LabeledSubgraph> training) {
  if (training.empty()) return 10;
  std::vector<std::size_t> counts;
  counts.reserve(training.size());
  for (const auto& ls : training) counts.push_back(ls.sample.num_nodes());
  std::sort(counts.begin(), counts.end());
  const auto idx = static_cast<std::size_t>(std::ceil(0.6 * static_cast<double>(counts.size()))) - 1;
  return std::clamp(static_cast<int>(counts[idx]), 10, 200);
}

std::size_t ModelParams::num_parameters() const {
  std::size_t n = 0;
  for (const auto& w : weights) n += w.size();
  return n;
}

bool ModelParams::all_finite() const {
  for (const auto& w : weights) {
    for (double x : w.data) {
      if (!std::isfinite(x)) return false;
    }
  }
  return true;
}

ModelParams init_params(const ModelConfig& cfg, std::size_t input_width) {
  validate(cfg);
  if (input_width == 0) throw UsageError("input width must be positive");
  ModelParams p;
  p.input_width = input_width;
  Rng rng(derive_key(cfg.seed, "model/init"));
  auto glorot = [&](std::size_t fan_in, std::size_t fan_out) {
    Matrix m(fan_in, fan_out);
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& x : m.data) x = (2.0 * rng.uniform() - 1.0) * limit;
    return m;
  };
  std::size_t in = input_width;
  for (int d : cfg.layer_dims) {
    p.weights.push_back(glorot(in, static_cast<std::size_t>(d)));
    in = static_cast<std::size_t>(d);
  }
  const auto pooled = static_cast<std::size_t>(cfg.sortpool_k) *
                      static_cast<std::size_t>(cfg.concat_width());
  const auto hidden = static_cast<std::size_t>(cfg.mlp_hidden);
  p.weights.push_back(glorot(pooled, hidden));
  p.weights.emplace_back(1, hidden);
  p.weights.push_back(glorot(hidden, 1));
  p.weights.emplace_back(1, 1);
  p.adam_m = zero_gradients(p);
  p.adam_v = zero_gradients(p);
  return p;
}

Gradients zero_gradients(const ModelParams& params) {
  Gradients g;
  g.reserve(params.weights.size());
  for (const auto& w : params.weights) g.emplace_back(w.rows, w.cols);
  return g;
}

Matrix NormalizedAdjacency::to_dense() const {
  Matrix m(size(), size());
  for (std::size_t r = 0; r < size(); ++r) {
    for (std::size_t e = offsets[r]; e < offsets[r + 1]; ++e) m(r, cols[e]) = values[e];
  }
  return m;
}

Matrix NormalizedAdjacency::multiply(const Matrix& x) const {
  Matrix out(size(), x.cols);
  for (std::size_t r = 0; r < size(); ++r) {
    double* o = out.data.data() + r * out.cols;
    for (std::size_t e = offsets[r]; e < offsets[r + 1]; ++e) {
      const double w = values[e];
      const double* xr = x.data.data() + cols[e] * x.cols;
      for (std::size_t j = 0; j < x.cols; ++j) o[j] += w * xr[j];
    }
  }
  return out;
}

NormalizedAdjacency normalize_adjacency(const Graph& local) {
  const std::size_t n = local.num_nodes();
  std::vector<double> inv_sqrt(n);
  for (NodeId i = 0; i < n; ++i) {
    inv_sqrt[i] = 1.0 / std::sqrt(static_cast<double>(local.degree(i) + 1));
  }
  NormalizedAdjacency a;
  a.offsets.reserve(n + 1);
  a.offsets.push_back(0);
  for (NodeId i = 0; i < n; ++i) {
    bool self_done = false;
    for (NodeId j : local.neighbors(i)) {
      if (!self_done && j > i) {
        a.cols.push_back(i);
        a.values.push_back(inv_sqrt[i] * inv_sqrt[i]);
        self_done = true;
      }
      a.cols.push_back(j);
      a.values.push_back(inv_sqrt[i] * inv_sqrt[j]);
    }
    if (!self_done) {
      a.cols.push_back(i);
      a.values.push_back(inv_sqrt[i] * inv_sqrt[i]);
    }
    a.offsets.push_back(a.cols.size());
  }
  return a;
}

double bce_with_logits(double logit, int label) {
  return std::max(logit, 0.0) - logit * label + std::log1p(std::exp(-std::abs(logit)));
}

double forward(const LabeledSubgraph& ls, const ModelParams& params, const ModelConfig& cfg,
               bool train_mode, Rng& rng, ForwardCache& cache) {
  const Matrix& x = ls.node_input;
  const std::size_t n = ls.sample.num_nodes();
  if (x.rows != n || n == 0) throw DataError("node input rows do not match subgraph size");
  if (x.cols != params.input_width) {
    throw DataError("node input width " + std::to_string(x.cols) + " does not match model width " +
                    std::to_string(params.input_width));
  }
  const std::size_t layers = params.num_layers();
  if (layers != cfg.layer_dims.size()) throw DataError("params do not match layer config");

  cache.params = &params;
  cache.params_version = params.version;
  cache.adj = normalize_adjacency(ls.sample.local);
  cache.layer_in.assign(1, x);
  cache.layer_out.clear();
  for (std::size_t l = 0; l < layers; ++l) {
    Matrix h = cache.adj.multiply(matmul(cache.layer_in[l], params.conv(l)));
    for (double& v : h.data) v = std::tanh(v);
    cache.layer_out.push_back(std::move(h));
    if (l + 1 < layers) cache.layer_in.push_back(cache.layer_out.back());
  }

  // SortPooling on the last channel.
  const Matrix& last = cache.layer_out.back();
  const std::size_t sort_col = last.cols - 1;
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return last(a, sort_col) > last(b, sort_col);
  });
  const auto k = static_cast<std::size_t>(cfg.sortpool_k);
  order.resize(std::min(k, n));
  cache.selected = std::move(order);

  const auto width = static_cast<std::size_t>(cfg.concat_width());
  cache.pooled.assign(k * width, 0.0);
  for (std::size_t r = 0; r < cache.selected.size(); ++r) {
    double* dst = cache.pooled.data() + r * width;
    for (const Matrix& z : cache.layer_out) {
      const auto src = z.row(cache.selected[r]);
      dst = std::copy(src.begin(), src.end(), dst);
    }
  }

  cache.keep_scale.clear();
  if (train_mode && cfg.dropout > 0.0) {
    cache.keep_scale.resize(cache.pooled.size());
    const double scale = 1.0 / (1.0 - cfg.dropout);
    for (double& s : cache.keep_scale) s = rng.uniform() < cfg.dropout ? 0.0 : scale;
  }

  const Matrix& w1 = params.hidden_w();
  const std::size_t hidden = w1.cols;
  if (w1.rows != cache.pooled.size()) throw DataError("params do not match sortpool size");
  cache.hidden_pre.assign(params.hidden_b().data.begin(), params.hidden_b().data.end());
  for (std::size_t i = 0; i < cache.pooled.size(); ++i) {
    double xi = cache.pooled[i];
    if (!cache.keep_scale.empty()) xi *= cache.keep_scale[i];
    if (xi == 0.0) continue;
    const double* wr = w1.data.data() + i * hidden;
    for (std::size_t j = 0; j < hidden; ++j) cache.hidden_pre[j] += xi * wr[j];
  }
  cache.hidden.resize(hidden);
  double logit = params.out_b()(0, 0);
  for (std::size_t j = 0; j < hidden; ++j) {
    cache.hidden[j] = std::max(cache.hidden_pre[j], 0.0);
    logit += cache.hidden[j] * params.out_w()(j, 0);
  }
  cache.logit = logit;
  return logit;
}

void backward(const ForwardCache& cache, const ModelParams& params, const ModelConfig& cfg,
              int label, Gradients& accum) {
  if (cache.params != &params || cache.params_version != params.version) {
    throw InvariantError("backward called with a stale forward cache");
  }
  if (accum.size() != params.weights.size()) throw InvariantError("gradient layout mismatch");
  const std::size_t layers = params.num_layers();
  const double dlogit = sigmoid(cache.logit) - label;

  Matrix& g_out_b = accum[layers + 3];
  Matrix& g_out_w = accum[layers + 2];
  Matrix& g_hid_b = accum[layers + 1];
  Matrix& g_hid_w = accum[layers];
  const std::size_t hidden = cache.hidden.size();

  g_out_b(0, 0) += dlogit;
  std::vector<double> dpre(hidden);
  for (std::size_t j = 0; j < hidden; ++j) {
    g_out_w(j, 0) += cache.hidden[j] * dlogit;
    dpre[j] = cache.hidden_pre[j] > 0.0 ? params.out_w()(j, 0) * dlogit : 0.0;
    g_hid_b(0, j) += dpre[j];
  }

  const Matrix& w1 = params.hidden_w();
  std::vector<double> dpooled(cache.pooled.size(), 0.0);
  const bool dropped = !cache.keep_scale.empty();
  for (std::size_t i = 0; i < cache.pooled.size(); ++i) {
    const double scale = dropped ? cache.keep_scale[i] : 1.0;
    if (scale == 0.0) continue;
    const double xi = cache.pooled[i] * scale;
    const double* wr = w1.data.data() + i * hidden;
    double* gr = g_hid_w.data.data() + i * hidden;
    double acc = 0.0;
    for (std::size_t j = 0; j < hidden; ++j) {
      gr[j] += xi * dpre[j];
      acc += wr[j] * dpre[j];
    }
    dpooled[i] = acc * scale;
  }

  // Route pooled gradients back to the selected rows of each layer output;
  // padded rows have no source and are dropped.
  const auto width = static_cast<std::size_t>(cfg.concat_width());
  std::vector<Matrix> dout;
  dout.reserve(layers);
  for (const Matrix& z : cache.layer_out) dout.emplace_back(z.rows, z.cols);
  for (std::size_t r = 0; r < cache.selected.size(); ++r) {
    const double* src = dpooled.data() + r * width;
    for (std::size_t l = 0; l < layers; ++l) {
      auto row = dout[l].row(cache.selected[r]);
      for (double& v : row) v += *src++;
    }
  }

  for (std::size_t l = layers; l-- > 0;) {
    Matrix dh = std::move(dout[l]);
    const Matrix& z = cache.layer_out[l];
    for (std::size_t i = 0; i < dh.size(); ++i) dh.data[i] *= 1.0 - z.data[i] * z.data[i];
    // Â is symmetric, so Â^T dH == Â dH.
    const Matrix dp = cache.adj.multiply(dh);
    Matrix g_conv(params.conv(l).rows, params.conv(l).cols);
    add_matmul_tn(cache.layer_in[l], dp, g_conv);
    for (std::size_t i = 0; i < g_conv.size(); ++i) accum[l].data[i] += g_conv.data[i];
    if (l > 0) add_matmul_nt(dp, params.conv(l), dout[l - 1]);
  }
}

void adam_step(ModelParams& params, const Gradients& grads, double lr, double beta1,
               double beta2, double eps) {
  if (grads.size() != params.weights.size()) throw InvariantError("gradient layout mismatch");
  for (std::size_t t = 0; t < grads.size(); ++t) {
    if (grads[t].size() != params.weights[t].size()) {
      throw InvariantError("gradient shape mismatch");
    }
    for (double g : grads[t].data) {
      if (!std::isfinite(g)) {
        throw DataError("non-finite gradient in tensor " + std::to_string(t) + " at step " +
                        std::to_string(params.step + 1) + "; aborting training");
      }
    }
  }
  ++params.step;
  ++params.version;
  const double step = static_cast<double>(params.step);
  const double c1 = 1.0 - std::pow(beta1, step);
  const double c2 = 1.0 - std::pow(beta2, step);
  for (std::size_t t = 0; t < grads.size(); ++t) {
    double* w = params.weights[t].data.data();
    double* m = params.adam_m[t].data.data();
    double* v = params.adam_v[t].data.data();
    const double* g = grads[t].data.data();
    const std::size_t size = grads[t].size();
    for (std::size_t i = 0; i < size; ++i) {
      m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
      v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      w[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  }
}

double predict(const ModelParams& params, const LabeledSubgraph& ls, const ModelConfig& cfg) {
  ForwardCache cache;
  Rng unused(0);
  return sigmoid(forward(ls, params, cfg, false, unused, cache));
}

std::vector<double> predict_batch(const ModelParams& params,
                                  std::span<const LabeledSubgraph> samples,
                                  const ModelConfig& cfg, unsigned threads) {
  std::vector<double> out(samples.size());
  parallel_for(samples.size(), threads,
               [&](std::size_t i) { out[i] = predict(params, samples[i], cfg); });
  return out;
}

namespace {

double validation_auc(const ModelParams& params, std::span<const LabeledSubgraph> samples,
                      std::span<const int> labels, const ModelConfig& cfg, unsigned threads) {
  const auto scores = predict_batch(params, samples, cfg, threads);
  std::vector<double> pos, neg;
  for (std::size_t i = 0; i < scores.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(scores[i]);
  return auc(pos, neg);
}

void check_labels(std::span<const LabeledSubgraph> samples, std::span<const int> labels,
                  const char* what) {
  if (samples.size() != labels.size()) {
    throw DataError(std::string(what) + ": sample and label counts differ");
  }
  bool has_pos = false, has_neg = false;
  for (int y : labels) {
    if (y != 0 && y != 1) throw DataError(std::string(what) + ": labels must be 0 or 1");
    (y == 1 ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) {
    throw DataError(std::string(what) + " set must contain both positive and negative links");
  }
}

}  // namespace

TrainResult train(std::span<const LabeledSubgraph> train_samples, std::span<const int> train_labels,
                  std::span<const LabeledSubgraph> val_samples, std::span<const int> val_labels,
                  const ModelConfig& cfg, unsigned threads) {
  validate(cfg);
  check_labels(train_samples, train_labels, "training");
  check_labels(val_samples, val_labels, "validation");
  const std::size_t width = train_samples.front().node_input.cols;

  TrainResult result;
  ModelParams params = init_params(cfg, width);
  result.best = params;
  double best_auc = -1.0;

  const unsigned workers = resolve_threads(threads);
  std::vector<std::size_t> order(train_samples.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng shuffle_rng(derive_key(cfg.seed, "train/shuffle", {static_cast<std::uint64_t>(epoch)}));
    shuffle(order, shuffle_rng);

    double loss_sum = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), begin + static_cast<std::size_t>(cfg.batch_size));
      Gradients grads = zero_gradients(params);

      // Waves of `workers` samples; each wave's per-sample gradients are
      // added to the batch total in sample order.
      std::vector<Gradients> slots(std::min<std::size_t>(workers, end - begin));
      std::vector<double> losses(end - begin);
      for (std::size_t wave = begin; wave < end; wave += slots.size()) {
        const std::size_t count = std::min(slots.size(), end - wave);
        auto run = [&](std::size_t s, Gradients& into) {
          const std::size_t pos = wave + s;
          const std::size_t idx = order[pos];
          Rng drop_rng(derive_key(cfg.seed, "train/dropout",
                                  {static_cast<std::uint64_t>(epoch), pos}));
          ForwardCache cache;
          const double logit = forward(train_samples[idx], params, cfg, true, drop_rng, cache);
          losses[pos - begin] = bce_with_logits(logit, train_labels[idx]);
          backward(cache, params, cfg, train_labels[idx], into);
        };
        if (count == 1 || workers == 1) {
          // backward adds each entry once, so this equals the slot path.
          for (std::size_t s = 0; s < count; ++s) run(s, grads);
        } else {
          parallel_for(count, workers, [&](std::size_t s) {
            slots[s] = zero_gradients(params);
            run(s, slots[s]);
          });
          for (std::size_t s = 0; s < count; ++s) {
            for (std::size_t t = 0; t < grads.size(); ++t) {
              double* dst = grads[t].data.data();
              const double* src = slots[s][t].data.data();
              for (std::size_t i = 0; i < grads[t].size(); ++i) dst[i] += src[i];
            }
          }
        }
      }
      for (double l : losses) loss_sum += l;

      const double inv = 1.0 / static_cast<double>(end - begin);
      for (auto& g : grads) {
        for (double& x : g.data) x *= inv;
      }
      adam_step(params, grads, cfg.lr);
    }

    result.history.loss.push_back(loss_sum / static_cast<double>(order.size()));
    const double val = validation_auc(params, val_samples, val_labels, cfg, threads);
    result.history.val_auc.push_back(val);
    if (val > best_auc) {
      best_auc = val;
      result.best = params;
      result.history.best_epoch = epoch;
    }
  }
  return result;
}

std::uint64_t config_hash(const ModelConfig& cfg, std::size_t input_width) {
  std::ostringstream s;
  s << "layers=";
  for (int d : cfg.layer_dims) s << d << ',';
  s << ";k=" << cfg.sortpool_k << ";hidden=" << cfg.mlp_hidden << ";in=" << input_width;
  return fnv1a(s.str());
}

void save_params(const ModelParams& params, const ModelConfig& cfg,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(kMagic, sizeof kMagic);
  write_u64(out, config_hash(cfg, params.input_width));
  const std::size_t tensors = params.weights.size();
  write_u64(out, 3 * tensors + 1);
  auto put = [&](std::span<const double> values) {
    write_u64(out, values.size());
    for (double v : values) write_u64(out, std::bit_cast<std::uint64_t>(v));
  };
  for (const auto& w : params.weights) put(w.data);
  for (const auto& m : params.adam_m) put(m.data);
  for (const auto& v : params.adam_v) put(v.data);
  const double step = static_cast<double>(params.step);
  put(std::span<const double>(&step, 1));
  if (!out) throw DataError("write failed: " + path.string());
}

ModelParams load_params(const std::filesystem::path& path, const ModelConfig& cfg,
                        std::size_t input_width) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
    throw DataError(path.string() + ": not a sesample checkpoint (bad magic)");
  }
  std::uint64_t hash = 0, count = 0;
  if (!read_u64(in, hash) || !read_u64(in, count)) {
    throw DataError(path.string() + ": truncated checkpoint header");
  }
  if (hash != config_hash(cfg, input_width)) {
    throw DataError(path.string() +
                    ": config hash mismatch (checkpoint was written for a different "
                    "layer/sortpool/hidden/input configuration)");
  }
  ModelParams p = init_params(cfg, input_width);
  const std::size_t tensors = p.weights.size();
  if (count != 3 * tensors + 1) throw DataError(path.string() + ": unexpected tensor count");

  auto get = [&](std::vector<double>& dst, std::size_t index) {
    std::uint64_t len = 0;
    if (!read_u64(in, len)) {
      throw DataError(path.string() + ": truncated checkpoint at tensor " + std::to_string(index));
    }
    if (len != dst.size()) {
      throw DataError(path.string() + ": tensor " + std::to_string(index) + " has length " +
                      std::to_string(len) + ", expected " + std::to_string(dst.size()));
    }
    for (double& v : dst) {
      std::uint64_t bits = 0;
      if (!read_u64(in, bits)) {
        throw DataError(path.string() + ": truncated checkpoint in tensor " +
                        std::to_string(index));
      }
      v = std::bit_cast<double>(bits);
    }
  };
  std::size_t index = 0;
  for (auto& w : p.weights) get(w.data, index++);
  for (auto& m : p.adam_m) get(m.data, index++);
  for (auto& v : p.adam_v) get(v.data, index++);
  std::vector<double> step(1);
  get(step, index);
  p.step = static_cast<std::uint64_t>(step[0]);
  char extra;
  if (in.read(&extra, 1)) throw DataError(path.string() + ": trailing bytes after checkpoint");
  return p;
}

}  // namespace sesample
