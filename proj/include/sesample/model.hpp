#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sesample/drnl.hpp"
#include "sesample/graph.hpp"
#include "sesample/matrix.hpp"
#include "sesample/rng.hpp"

namespace sesample {

/// Hyperparameters of the subgraph classifier.
struct ModelConfig {
  std::vector<int> layer_dims{32, 32, 32, 1};  // last layer is the sort channel
  int sortpool_k = 30;
  int mlp_hidden = 128;
  double dropout = 0.5;
  double lr = 1e-4;
  int batch_size = 32;
  int epochs = 50;
  std::uint64_t seed = 0;

  int concat_width() const;
};

void validate(const ModelConfig& cfg);

/// SortPooling size policy: the 0.6-quantile of the training subgraph node
/// counts, clamped to [10, 200].
int choose_sortpool_k(std::span<const LabeledSubgraph> training);

/// Trainable tensors in declaration order (conv layers, hidden weight,
/// hidden bias, output weight, output bias) plus Adam state.
struct ModelParams {
  std::vector<Matrix> weights;
  std::vector<Matrix> adam_m;
  std::vector<Matrix> adam_v;
  std::uint64_t step = 0;
  std::size_t input_width = 0;
  std::uint64_t version = 0;  // bumped on every update; guards forward caches

  std::size_t num_layers() const noexcept { return weights.size() - 4; }
  const Matrix& conv(std::size_t l) const { return weights[l]; }
  const Matrix& hidden_w() const { return weights[num_layers()]; }
  const Matrix& hidden_b() const { return weights[num_layers() + 1]; }
  const Matrix& out_w() const { return weights[num_layers() + 2]; }
  const Matrix& out_b() const { return weights[num_layers() + 3]; }
  std::size_t num_parameters() const;
  bool all_finite() const;
};

using Gradients = std::vector<Matrix>;

/// Glorot-uniform weights, zero biases and zero Adam state, seeded from
/// cfg.seed.
ModelParams init_params(const ModelConfig& cfg, std::size_t input_width);

/// Zero tensors shaped like params.weights.
Gradients zero_gradients(const ModelParams& params);

/// D^{-1/2} (A + I) D^{-1/2} for a local adjacency, stored sparsely. Each
/// row lists its entries in increasing column order, self-loop included.
struct NormalizedAdjacency {
  std::vector<std::size_t> offsets;
  std::vector<NodeId> cols;
  std::vector<double> values;

  std::size_t size() const noexcept { return offsets.size() - 1; }
  Matrix to_dense() const;
  /// Returns this * x (x has size() rows).
  Matrix multiply(const Matrix& x) const;
};

NormalizedAdjacency normalize_adjacency(const Graph& local);

/// Intermediates kept by forward() for backward().
struct ForwardCache {
  NormalizedAdjacency adj;
  std::vector<Matrix> layer_in;   // input of each conv layer
  std::vector<Matrix> layer_out;  // tanh output of each conv layer
  std::vector<NodeId> selected;   // local rows kept by SortPooling, in order
  std::vector<double> pooled;     // flattened k x concat_width, pre-dropout
  std::vector<double> keep_scale; // per-entry dropout factor; empty = no dropout
  std::vector<double> hidden_pre;
  std::vector<double> hidden;
  double logit = 0.0;
  const ModelParams* params = nullptr;
  std::uint64_t params_version = 0;
};

/// Graph convolutions Z' = tanh(Â Z W), concatenation of all layer outputs,
/// SortPooling on the last channel (descending, ties by local id, zero
/// padded to k rows), dropout in train mode, ReLU hidden layer, scalar logit.
double forward(const LabeledSubgraph& ls, const ModelParams& params, const ModelConfig& cfg,
               bool train_mode, Rng& rng, ForwardCache& cache);

/// Numerically stable binary cross-entropy on a logit.
double bce_with_logits(double logit, int label);

/// Adds the gradient of bce_with_logits(cache.logit, label) with respect to
/// every weight into `accum`. The SortPooling selection is treated as
/// constant. Throws InvariantError when the cache belongs to other params.
void backward(const ForwardCache& cache, const ModelParams& params, const ModelConfig& cfg,
              int label, Gradients& accum);

/// Bias-corrected Adam update. Throws DataError on a non-finite gradient.
void adam_step(ModelParams& params, const Gradients& grads, double lr, double beta1 = 0.9,
               double beta2 = 0.999, double eps = 1e-8);

/// Sigmoid of the dropout-free logit.
double predict(const ModelParams& params, const LabeledSubgraph& ls, const ModelConfig& cfg);

std::vector<double> predict_batch(const ModelParams& params,
                                  std::span<const LabeledSubgraph> samples,
                                  const ModelConfig& cfg, unsigned threads = 1);

struct TrainHistory {
  std::vector<double> loss;     // mean training loss per epoch
  std::vector<double> val_auc;  // validation AUC after each epoch
  int best_epoch = -1;          // 0-based; -1 if no epoch ran
};

struct TrainResult {
  ModelParams best;
  TrainHistory history;
};

/// Mini-batch Adam training with a seeded shuffle per epoch. Returns the
/// snapshot with the highest validation AUC (earliest wins ties). Per-sample
/// work runs on up to `threads` workers; gradients are reduced in sample
/// order, so results do not depend on the thread count.
TrainResult train(std::span<const LabeledSubgraph> train_samples, std::span<const int> train_labels,
                  std::span<const LabeledSubgraph> val_samples, std::span<const int> val_labels,
                  const ModelConfig& cfg, unsigned threads = 1);

/// Hash of everything that determines tensor shapes.
std::uint64_t config_hash(const ModelConfig& cfg, std::size_t input_width);

/// Checkpoint: 8-byte magic, config hash, tensor count, then each tensor as
/// a u64 length followed by little-endian doubles. Weights, Adam m, Adam v
/// and the step counter are stored in that order.
void save_params(const ModelParams& params, const ModelConfig& cfg,
                 const std::filesystem::path& path);

/// Throws DataError on a bad magic, truncation or config-hash mismatch.
ModelParams load_params(const std::filesystem::path& path, const ModelConfig& cfg,
                        std::size_t input_width);

}  // namespace sesample
