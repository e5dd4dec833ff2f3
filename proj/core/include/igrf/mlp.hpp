#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "igrf/matrix.hpp"

namespace igrf {

enum class LossKind { cross_entropy, squared_error };

struct MlpConfig {
  std::vector<std::size_t> hidden_sizes = {128, 128};
  double learning_rate = 0.0003;
  std::size_t batch_size = 64;
  std::size_t max_epochs = 300;
  std::size_t early_stop_patience = 30;
  LossKind loss = LossKind::cross_entropy;
  std::uint64_t seed = 0;
  double bn_epsilon = 1e-5;
  double bn_momentum = 0.9;
};

struct DenseLayer {
  Matrix w;  // fan_in x fan_out
  std::vector<double> b;
};

struct BatchNormLayer {
  std::vector<double> gamma, beta;
  std::vector<double> running_mean, running_var;
};

struct TrainTrace {
  std::size_t epochs_run = 0;
  double best_val_loss = 0.0;
  std::size_t best_epoch = 0;
};

/// Fully connected net: input -> [dense -> batch norm -> relu] per hidden
/// layer -> dense -> softmax. All arithmetic is 64-bit.
struct MlpModel {
  MlpConfig config;
  std::size_t input_dim = 0;
  std::size_t n_classes = 0;
  std::vector<DenseLayer> dense;  // hidden_sizes.size() + 1 entries
  std::vector<BatchNormLayer> bn; // one per hidden layer
  TrainTrace trace;

  /// All trainable tensors in a fixed order: per dense layer w then b, then
  /// per BN layer gamma then beta. Gradient and Adam buffers mirror this.
  std::vector<std::span<double>> parameter_views();
  std::vector<std::span<const double>> parameter_views() const;
};

enum class ForwardMode { train, infer };

/// Per-layer activations kept for backpropagation (train-mode statistics).
struct ForwardCache {
  Matrix input;
  struct Layer {
    Matrix z;                        // dense output
    std::vector<double> mean, var;   // batch statistics (biased variance)
    Matrix xhat;                     // normalized, before scale/shift
    Matrix activated;                // relu(gamma*xhat + beta)
  };
  std::vector<Layer> layers;
  Matrix logits;
  Matrix probs;
};

/// Gradient tensors in parameter_views() order.
using Gradients = std::vector<std::vector<double>>;

struct AdamState {
  std::vector<std::vector<double>> m, v;
  std::size_t t = 0;
  double beta1 = 0.9, beta2 = 0.999, epsilon = 1e-8;

  static AdamState for_model(const MlpModel& m);
};

/// Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))) drawn from
/// config.seed; zero biases; BN gamma 1, beta 0, running stats (0, 1).
MlpModel init_model(const MlpConfig& config, std::size_t input_dim, std::size_t n_classes);

/// Row-stochastic class probabilities. Train mode normalizes with batch
/// statistics and updates the running averages (the batch needs >= 2 rows);
/// infer mode uses the running statistics.
Matrix forward(MlpModel& m, const Matrix& batch, ForwardMode mode);

/// Train-mode forward that leaves running statistics untouched; fills the
/// cache needed by backward().
Matrix forward_cached(const MlpModel& m, const Matrix& batch, ForwardCache& cache);

double softmax_row_max_subtracted(std::span<const double> logits, std::span<double> out);

/// Mean loss over samples: cross-entropy -sum y ln(p), or squared error
/// sum (y-p)^2 per sample.
double loss(const Matrix& pred, const Matrix& target_one_hot, LossKind kind);

/// Train-mode loss of a batch as a pure function of the parameters (no
/// running-statistic side effects); this is what gradient checks probe.
double training_loss(const MlpModel& m, const Matrix& batch, const Matrix& target_one_hot,
                     LossKind kind);

/// Analytic gradients of training_loss, via backprop through the softmax,
/// the loss and the batch-norm train-mode statistics.
Gradients backward(const MlpModel& m, const ForwardCache& cache, const Matrix& target_one_hot,
                   LossKind kind);

/// One forward/backward pass plus an Adam update on every parameter; also
/// refreshes the BN running statistics. Returns the batch loss. Throws
/// NumericError when the loss is not finite.
double train_step(MlpModel& m, const Matrix& batch, const Matrix& target_one_hot,
                  AdamState& state);

/// Hook for tests: overrides the validation-loss computation per epoch.
using ValLossHook = std::function<double(std::size_t epoch, const MlpModel& m)>;

/// Mini-batch training with seeded per-epoch shuffles and early stopping:
/// stops after early_stop_patience consecutive epochs without a strictly
/// lower validation loss and restores the best epoch's parameters.
MlpModel fit(const MlpConfig& config, const Matrix& x_train,
             std::span<const std::int32_t> y_train, const Matrix& x_val,
             std::span<const std::int32_t> y_val, std::size_t n_classes,
             const ValLossHook& val_loss_hook = {});

Matrix predict_proba(const MlpModel& m, const Matrix& batch);
/// Row-wise argmax; ties resolve to the lowest class index.
std::vector<std::int32_t> predict(const MlpModel& m, const Matrix& batch);

Matrix one_hot_targets(std::span<const std::int32_t> labels, std::size_t n_classes);

std::string save_model_json(const MlpModel& m);
MlpModel load_model_json(const std::string& text);

}  // namespace igrf
