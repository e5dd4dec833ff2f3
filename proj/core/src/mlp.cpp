#include "igrf/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "igrf/errors.hpp"
#include "igrf/rng.hpp"

namespace igrf {

namespace {

// B x in times in x out.
void matmul(const Matrix& a, const Matrix& w, Matrix& out) {
  out = Matrix(a.rows, w.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* arow = a.data.data() + i * a.cols;
    double* orow = out.data.data() + i * out.cols;
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = arow[k];
      if (aik == 0.0) continue;
      const double* wrow = w.data.data() + k * w.cols;
      for (std::size_t j = 0; j < w.cols; ++j) orow[j] += aik * wrow[j];
    }
  }
}

// a^T times g, accumulated into out (fan_in x fan_out).
void matmul_at_b(const Matrix& a, const Matrix& g, std::vector<double>& out) {
  out.assign(a.cols * g.cols, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* arow = a.data.data() + i * a.cols;
    const double* grow = g.data.data() + i * g.cols;
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = arow[k];
      if (aik == 0.0) continue;
      double* orow = out.data() + k * g.cols;
      for (std::size_t j = 0; j < g.cols; ++j) orow[j] += aik * grow[j];
    }
  }
}

// g times w^T.
void matmul_b_wt(const Matrix& g, const Matrix& w, Matrix& out) {
  out = Matrix(g.rows, w.rows);
  for (std::size_t i = 0; i < g.rows; ++i) {
    const double* grow = g.data.data() + i * g.cols;
    double* orow = out.data.data() + i * out.cols;
    for (std::size_t j = 0; j < w.cols; ++j) {
      const double gij = grow[j];
      if (gij == 0.0) continue;
      for (std::size_t k = 0; k < w.rows; ++k) orow[k] += gij * w.data[k * w.cols + j];
    }
  }
}

void add_bias(Matrix& m, const std::vector<double>& b) {
  for (std::size_t i = 0; i < m.rows; ++i) {
    double* row = m.data.data() + i * m.cols;
    for (std::size_t j = 0; j < m.cols; ++j) row[j] += b[j];
  }
}

}  // namespace

std::vector<std::span<double>> MlpModel::parameter_views() {
  std::vector<std::span<double>> out;
  for (auto& layer : dense) {
    out.emplace_back(layer.w.data);
    out.emplace_back(layer.b);
  }
  for (auto& layer : bn) {
    out.emplace_back(layer.gamma);
    out.emplace_back(layer.beta);
  }
  return out;
}

std::vector<std::span<const double>> MlpModel::parameter_views() const {
  std::vector<std::span<const double>> out;
  for (const auto& layer : dense) {
    out.emplace_back(layer.w.data);
    out.emplace_back(layer.b);
  }
  for (const auto& layer : bn) {
    out.emplace_back(layer.gamma);
    out.emplace_back(layer.beta);
  }
  return out;
}

AdamState AdamState::for_model(const MlpModel& model) {
  AdamState s;
  for (const auto view : model.parameter_views()) {
    s.m.emplace_back(view.size(), 0.0);
    s.v.emplace_back(view.size(), 0.0);
  }
  return s;
}

MlpModel init_model(const MlpConfig& config, std::size_t input_dim, std::size_t n_classes) {
  if (input_dim == 0) throw DataError("init_model: zero input dimension");
  if (n_classes < 2) throw DataError("init_model: need at least two classes");

  MlpModel m;
  m.config = config;
  m.input_dim = input_dim;
  m.n_classes = n_classes;

  Rng rng(config.seed);
  std::vector<std::size_t> widths;
  widths.push_back(input_dim);
  widths.insert(widths.end(), config.hidden_sizes.begin(), config.hidden_sizes.end());
  widths.push_back(n_classes);

  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    DenseLayer layer;
    layer.w = Matrix(widths[l], widths[l + 1]);
    const double bound =
        std::sqrt(6.0 / static_cast<double>(widths[l] + widths[l + 1]));
    for (auto& v : layer.w.data) v = (2.0 * uniform_real(rng) - 1.0) * bound;
    layer.b.assign(widths[l + 1], 0.0);
    m.dense.push_back(std::move(layer));
  }
  for (std::size_t h : config.hidden_sizes) {
    BatchNormLayer layer;
    layer.gamma.assign(h, 1.0);
    layer.beta.assign(h, 0.0);
    layer.running_mean.assign(h, 0.0);
    layer.running_var.assign(h, 1.0);
    m.bn.push_back(std::move(layer));
  }
  return m;
}

double softmax_row_max_subtracted(std::span<const double> logits, std::span<double> out) {
  double max = logits[0];
  for (double v : logits) max = std::max(max, v);
  double sum = 0.0;
  for (std::size_t j = 0; j < logits.size(); ++j) {
    out[j] = std::exp(logits[j] - max);
    sum += out[j];
  }
  for (std::size_t j = 0; j < logits.size(); ++j) out[j] /= sum;
  return sum;
}

namespace {

void softmax_rows(Matrix& m) {
  for (std::size_t i = 0; i < m.rows; ++i) {
    auto row = m.row(i);
    softmax_row_max_subtracted(row, row);
  }
}

struct BnStats {
  std::vector<double> mean, var;
};

BnStats batch_stats(const Matrix& z) {
  BnStats s;
  s.mean.assign(z.cols, 0.0);
  s.var.assign(z.cols, 0.0);
  const double inv_b = 1.0 / static_cast<double>(z.rows);
  for (std::size_t i = 0; i < z.rows; ++i) {
    const double* row = z.data.data() + i * z.cols;
    for (std::size_t j = 0; j < z.cols; ++j) s.mean[j] += row[j];
  }
  for (auto& v : s.mean) v *= inv_b;
  for (std::size_t i = 0; i < z.rows; ++i) {
    const double* row = z.data.data() + i * z.cols;
    for (std::size_t j = 0; j < z.cols; ++j) {
      const double d = row[j] - s.mean[j];
      s.var[j] += d * d;
    }
  }
  for (auto& v : s.var) v *= inv_b;
  return s;
}

// Shared forward walk. When cache != nullptr, train-mode statistics are
// used and intermediate activations are recorded; otherwise the layer's
// running statistics normalize (infer mode).
Matrix forward_impl(const MlpModel& m, const Matrix& batch, bool train_stats,
                    ForwardCache* cache) {
  if (batch.cols != m.input_dim) {
    throw DataError("forward: batch width " + std::to_string(batch.cols) +
                    " does not match input dimension " + std::to_string(m.input_dim));
  }
  if (train_stats && batch.rows < 2) {
    throw DataError("forward: train mode needs a batch of at least 2 rows");
  }
  if (cache) {
    cache->input = batch;
    cache->layers.assign(m.bn.size(), {});
  }

  Matrix a = batch;
  for (std::size_t l = 0; l < m.bn.size(); ++l) {
    Matrix z;
    matmul(a, m.dense[l].w, z);
    add_bias(z, m.dense[l].b);

    BnStats stats;
    if (train_stats) {
      stats = batch_stats(z);
    } else {
      stats.mean = m.bn[l].running_mean;
      stats.var = m.bn[l].running_var;
    }

    Matrix xhat(z.rows, z.cols);
    Matrix activated(z.rows, z.cols);
    const auto& gamma = m.bn[l].gamma;
    const auto& beta = m.bn[l].beta;
    for (std::size_t j = 0; j < z.cols; ++j) {
      const double inv_std = 1.0 / std::sqrt(stats.var[j] + m.config.bn_epsilon);
      for (std::size_t i = 0; i < z.rows; ++i) {
        const double xh = (z(i, j) - stats.mean[j]) * inv_std;
        xhat(i, j) = xh;
        const double y = gamma[j] * xh + beta[j];
        activated(i, j) = y > 0.0 ? y : 0.0;
      }
    }

    if (cache) {
      auto& lc = cache->layers[l];
      lc.z = std::move(z);
      lc.mean = std::move(stats.mean);
      lc.var = std::move(stats.var);
      lc.xhat = std::move(xhat);
      lc.activated = activated;
    }
    a = std::move(activated);
  }

  Matrix logits;
  matmul(a, m.dense.back().w, logits);
  add_bias(logits, m.dense.back().b);
  Matrix probs = logits;
  softmax_rows(probs);
  if (cache) {
    cache->logits = std::move(logits);
    cache->probs = probs;
  }
  return probs;
}

void update_running_stats(MlpModel& m, const ForwardCache& cache) {
  const double momentum = m.config.bn_momentum;
  for (std::size_t l = 0; l < m.bn.size(); ++l) {
    auto& layer = m.bn[l];
    const auto& lc = cache.layers[l];
    for (std::size_t j = 0; j < layer.running_mean.size(); ++j) {
      layer.running_mean[j] = momentum * layer.running_mean[j] + (1.0 - momentum) * lc.mean[j];
      layer.running_var[j] = momentum * layer.running_var[j] + (1.0 - momentum) * lc.var[j];
    }
  }
}

}  // namespace

Matrix forward(MlpModel& m, const Matrix& batch, ForwardMode mode) {
  if (mode == ForwardMode::infer) return forward_impl(m, batch, false, nullptr);
  ForwardCache cache;
  Matrix probs = forward_impl(m, batch, true, &cache);
  update_running_stats(m, cache);
  return probs;
}

Matrix forward_cached(const MlpModel& m, const Matrix& batch, ForwardCache& cache) {
  return forward_impl(m, batch, true, &cache);
}

double loss(const Matrix& pred, const Matrix& target_one_hot, LossKind kind) {
  if (pred.rows != target_one_hot.rows || pred.cols != target_one_hot.cols) {
    throw DataError("loss: shape mismatch");
  }
  const double inv_b = 1.0 / static_cast<double>(pred.rows);
  double total = 0.0;
  if (kind == LossKind::cross_entropy) {
    for (std::size_t i = 0; i < pred.rows; ++i) {
      for (std::size_t j = 0; j < pred.cols; ++j) {
        const double y = target_one_hot(i, j);
        if (y != 0.0) total -= y * std::log(std::max(pred(i, j), 1e-300));
      }
    }
  } else {
    for (std::size_t i = 0; i < pred.rows; ++i) {
      for (std::size_t j = 0; j < pred.cols; ++j) {
        const double d = target_one_hot(i, j) - pred(i, j);
        total += d * d;
      }
    }
  }
  return total * inv_b;
}

double training_loss(const MlpModel& m, const Matrix& batch, const Matrix& target_one_hot,
                     LossKind kind) {
  ForwardCache cache;
  const Matrix probs = forward_cached(m, batch, cache);
  return loss(probs, target_one_hot, kind);
}

Gradients backward(const MlpModel& m, const ForwardCache& cache, const Matrix& target_one_hot,
                   LossKind kind) {
  const std::size_t batch_rows = cache.probs.rows;
  const double inv_b = 1.0 / static_cast<double>(batch_rows);

  // dL/dlogits.
  Matrix dlogits(cache.probs.rows, cache.probs.cols);
  if (kind == LossKind::cross_entropy) {
    for (std::size_t i = 0; i < dlogits.rows; ++i) {
      for (std::size_t j = 0; j < dlogits.cols; ++j) {
        dlogits(i, j) = (cache.probs(i, j) - target_one_hot(i, j)) * inv_b;
      }
    }
  } else {
    // dL/dp through the softmax Jacobian: dz = p .* (g - <g, p>).
    for (std::size_t i = 0; i < dlogits.rows; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < dlogits.cols; ++j) {
        const double g = 2.0 * (cache.probs(i, j) - target_one_hot(i, j)) * inv_b;
        dlogits(i, j) = g;  // reuse as scratch for g
        dot += g * cache.probs(i, j);
      }
      for (std::size_t j = 0; j < dlogits.cols; ++j) {
        dlogits(i, j) = cache.probs(i, j) * (dlogits(i, j) - dot);
      }
    }
  }

  const std::size_t n_dense = m.dense.size();
  const std::size_t n_bn = m.bn.size();
  Gradients grads(2 * n_dense + 2 * n_bn);

  // Output layer.
  const Matrix& last_a = n_bn > 0 ? cache.layers.back().activated : cache.input;
  matmul_at_b(last_a, dlogits, grads[2 * (n_dense - 1)]);
  auto& db_out = grads[2 * (n_dense - 1) + 1];
  db_out.assign(m.dense.back().b.size(), 0.0);
  for (std::size_t i = 0; i < dlogits.rows; ++i) {
    for (std::size_t j = 0; j < dlogits.cols; ++j) db_out[j] += dlogits(i, j);
  }

  Matrix da;
  matmul_b_wt(dlogits, m.dense.back().w, da);

  for (std::size_t l = n_bn; l-- > 0;) {
    const auto& lc = cache.layers[l];
    const auto& layer = m.bn[l];
    const std::size_t width = layer.gamma.size();

    // ReLU mask on the BN output y = gamma*xhat + beta (y > 0 iff activated > 0).
    Matrix dy = da;
    for (std::size_t i = 0; i < dy.rows; ++i) {
      for (std::size_t j = 0; j < dy.cols; ++j) {
        if (lc.activated(i, j) <= 0.0) dy(i, j) = 0.0;
      }
    }

    auto& dgamma = grads[2 * n_dense + 2 * l];
    auto& dbeta = grads[2 * n_dense + 2 * l + 1];
    dgamma.assign(width, 0.0);
    dbeta.assign(width, 0.0);
    for (std::size_t i = 0; i < dy.rows; ++i) {
      for (std::size_t j = 0; j < width; ++j) {
        dgamma[j] += dy(i, j) * lc.xhat(i, j);
        dbeta[j] += dy(i, j);
      }
    }

    // Backprop through the train-mode normalization (statistics depend on
    // the batch).
    Matrix dz(dy.rows, dy.cols);
    const double inv_rows = 1.0 / static_cast<double>(dy.rows);
    for (std::size_t j = 0; j < width; ++j) {
      const double inv_std = 1.0 / std::sqrt(lc.var[j] + m.config.bn_epsilon);
      double sum_dxhat = 0.0;
      double sum_dxhat_xc = 0.0;  // sum of dxhat * (z - mean)
      double sum_xc = 0.0;
      for (std::size_t i = 0; i < dy.rows; ++i) {
        const double dxhat = dy(i, j) * layer.gamma[j];
        const double xc = lc.z(i, j) - lc.mean[j];
        sum_dxhat += dxhat;
        sum_dxhat_xc += dxhat * xc;
        sum_xc += xc;
      }
      const double dvar = sum_dxhat_xc * (-0.5) * inv_std * inv_std * inv_std;
      const double dmean = -sum_dxhat * inv_std + dvar * (-2.0) * sum_xc * inv_rows;
      for (std::size_t i = 0; i < dy.rows; ++i) {
        const double dxhat = dy(i, j) * layer.gamma[j];
        const double xc = lc.z(i, j) - lc.mean[j];
        dz(i, j) = dxhat * inv_std + dvar * 2.0 * xc * inv_rows + dmean * inv_rows;
      }
    }

    const Matrix& a_prev = l > 0 ? cache.layers[l - 1].activated : cache.input;
    matmul_at_b(a_prev, dz, grads[2 * l]);
    auto& db = grads[2 * l + 1];
    db.assign(m.dense[l].b.size(), 0.0);
    for (std::size_t i = 0; i < dz.rows; ++i) {
      for (std::size_t j = 0; j < dz.cols; ++j) db[j] += dz(i, j);
    }

    if (l > 0) matmul_b_wt(dz, m.dense[l].w, da);
  }
  return grads;
}

double train_step(MlpModel& m, const Matrix& batch, const Matrix& target_one_hot,
                  AdamState& state) {
  ForwardCache cache;
  const Matrix probs = forward_cached(m, batch, cache);
  const double batch_loss = loss(probs, target_one_hot, m.config.loss);
  if (!std::isfinite(batch_loss)) throw NumericError("training diverged: non-finite loss");

  update_running_stats(m, cache);
  const Gradients grads = backward(m, cache, target_one_hot, m.config.loss);

  state.t += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  auto params = m.parameter_views();
  for (std::size_t p = 0; p < params.size(); ++p) {
    auto& mbuf = state.m[p];
    auto& vbuf = state.v[p];
    const auto& g = grads[p];
    auto view = params[p];
    for (std::size_t i = 0; i < view.size(); ++i) {
      mbuf[i] = state.beta1 * mbuf[i] + (1.0 - state.beta1) * g[i];
      vbuf[i] = state.beta2 * vbuf[i] + (1.0 - state.beta2) * g[i] * g[i];
      const double mhat = mbuf[i] / bc1;
      const double vhat = vbuf[i] / bc2;
      view[i] -= m.config.learning_rate * mhat / (std::sqrt(vhat) + state.epsilon);
    }
  }
  return batch_loss;
}

Matrix one_hot_targets(std::span<const std::int32_t> labels, std::size_t n_classes) {
  Matrix out(labels.size(), n_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out(i, static_cast<std::size_t>(labels[i])) = 1.0;
  }
  return out;
}

namespace {

struct Snapshot {
  std::vector<DenseLayer> dense;
  std::vector<BatchNormLayer> bn;
};

Snapshot take_snapshot(const MlpModel& m) { return {m.dense, m.bn}; }

void restore_snapshot(MlpModel& m, const Snapshot& s) {
  m.dense = s.dense;
  m.bn = s.bn;
}

}  // namespace

MlpModel fit(const MlpConfig& config, const Matrix& x_train,
             std::span<const std::int32_t> y_train, const Matrix& x_val,
             std::span<const std::int32_t> y_val, std::size_t n_classes,
             const ValLossHook& val_loss_hook) {
  if (x_train.rows == 0) throw DataError("fit: empty training set");
  if (x_train.rows < 2) throw DataError("fit: training needs at least 2 rows");
  if (y_train.size() != x_train.rows || y_val.size() != x_val.rows) {
    throw DataError("fit: label count mismatch");
  }
  if (!val_loss_hook && (x_val.rows == 0 || x_val.cols != x_train.cols)) {
    throw DataError("fit: validation set empty or width mismatch");
  }

  MlpModel model = init_model(config, x_train.cols, n_classes);
  AdamState adam = AdamState::for_model(model);
  const Matrix val_targets =
      val_loss_hook ? Matrix() : one_hot_targets(y_val, n_classes);

  // Distinct stream from the weight-init draw.
  Rng shuffle_rng(config.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<std::size_t> order(x_train.rows);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  double best_val = std::numeric_limits<double>::infinity();
  std::size_t best_epoch = 0;
  Snapshot best = take_snapshot(model);
  std::size_t epochs_without_improvement = 0;
  std::size_t epoch = 0;

  std::vector<std::size_t> batch_rows;
  while (epoch < config.max_epochs) {
    ++epoch;
    shuffle(order, shuffle_rng);

    std::size_t pos = 0;
    while (pos < order.size()) {
      std::size_t take = std::min(config.batch_size, order.size() - pos);
      // A trailing single row cannot be batch-normalized; fold it into the
      // previous batch.
      if (order.size() - pos - take == 1) ++take;
      batch_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                        order.begin() + static_cast<std::ptrdiff_t>(pos + take));
      const Matrix batch = x_train.select_rows(batch_rows);
      Matrix targets(batch_rows.size(), n_classes);
      for (std::size_t i = 0; i < batch_rows.size(); ++i) {
        targets(i, static_cast<std::size_t>(y_train[batch_rows[i]])) = 1.0;
      }
      train_step(model, batch, targets, adam);
      pos += take;
    }

    double val_loss_value;
    if (val_loss_hook) {
      val_loss_value = val_loss_hook(epoch, model);
    } else {
      const Matrix val_probs = predict_proba(model, x_val);
      val_loss_value = loss(val_probs, val_targets, config.loss);
    }
    if (!std::isfinite(val_loss_value)) throw NumericError("validation loss is not finite");

    if (val_loss_value < best_val) {
      best_val = val_loss_value;
      best_epoch = epoch;
      best = take_snapshot(model);
      epochs_without_improvement = 0;
    } else {
      ++epochs_without_improvement;
      if (epochs_without_improvement >= config.early_stop_patience) break;
    }
  }

  restore_snapshot(model, best);
  model.trace.epochs_run = epoch;
  model.trace.best_val_loss = best_val;
  model.trace.best_epoch = best_epoch;
  return model;
}

Matrix predict_proba(const MlpModel& m, const Matrix& batch) {
  return forward_impl(m, batch, false, nullptr);
}

std::vector<std::int32_t> predict(const MlpModel& m, const Matrix& batch) {
  const Matrix probs = predict_proba(m, batch);
  std::vector<std::int32_t> out(probs.rows);
  for (std::size_t i = 0; i < probs.rows; ++i) {
    std::size_t arg = 0;
    for (std::size_t j = 1; j < probs.cols; ++j) {
      if (probs(i, j) > probs(i, arg)) arg = j;
    }
    out[i] = static_cast<std::int32_t>(arg);
  }
  return out;
}

namespace {

nlohmann::json dense_to_json(const DenseLayer& l) {
  return {{"rows", l.w.rows}, {"cols", l.w.cols}, {"w", l.w.data}, {"b", l.b}};
}

DenseLayer dense_from_json(const nlohmann::json& j) {
  DenseLayer l;
  l.w.rows = j.at("rows").get<std::size_t>();
  l.w.cols = j.at("cols").get<std::size_t>();
  l.w.data = j.at("w").get<std::vector<double>>();
  l.b = j.at("b").get<std::vector<double>>();
  if (l.w.data.size() != l.w.rows * l.w.cols) throw DataError("model: bad dense tensor shape");
  return l;
}

}  // namespace

std::string save_model_json(const MlpModel& m) {
  nlohmann::json j;
  j["format"] = "igrf-mlp-v1";
  j["config"] = {{"hidden_sizes", m.config.hidden_sizes},
                 {"learning_rate", m.config.learning_rate},
                 {"batch_size", m.config.batch_size},
                 {"max_epochs", m.config.max_epochs},
                 {"early_stop_patience", m.config.early_stop_patience},
                 {"loss", m.config.loss == LossKind::cross_entropy ? "cross_entropy"
                                                                   : "squared_error"},
                 {"seed", m.config.seed},
                 {"bn_epsilon", m.config.bn_epsilon},
                 {"bn_momentum", m.config.bn_momentum}};
  j["input_dim"] = m.input_dim;
  j["n_classes"] = m.n_classes;
  j["dense"] = nlohmann::json::array();
  for (const auto& l : m.dense) j["dense"].push_back(dense_to_json(l));
  j["bn"] = nlohmann::json::array();
  for (const auto& l : m.bn) {
    j["bn"].push_back({{"gamma", l.gamma},
                       {"beta", l.beta},
                       {"running_mean", l.running_mean},
                       {"running_var", l.running_var}});
  }
  j["trace"] = {{"epochs_run", m.trace.epochs_run},
                {"best_val_loss", m.trace.best_val_loss},
                {"best_epoch", m.trace.best_epoch}};
  return j.dump(2);
}

MlpModel load_model_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("format", "") != "igrf-mlp-v1") throw DataError("model: unknown format");
  MlpModel m;
  const auto& c = j.at("config");
  m.config.hidden_sizes = c.at("hidden_sizes").get<std::vector<std::size_t>>();
  m.config.learning_rate = c.at("learning_rate").get<double>();
  m.config.batch_size = c.at("batch_size").get<std::size_t>();
  m.config.max_epochs = c.at("max_epochs").get<std::size_t>();
  m.config.early_stop_patience = c.at("early_stop_patience").get<std::size_t>();
  m.config.loss = c.at("loss").get<std::string>() == "squared_error" ? LossKind::squared_error
                                                                     : LossKind::cross_entropy;
  m.config.seed = c.at("seed").get<std::uint64_t>();
  m.config.bn_epsilon = c.at("bn_epsilon").get<double>();
  m.config.bn_momentum = c.at("bn_momentum").get<double>();
  m.input_dim = j.at("input_dim").get<std::size_t>();
  m.n_classes = j.at("n_classes").get<std::size_t>();
  for (const auto& l : j.at("dense")) m.dense.push_back(dense_from_json(l));
  for (const auto& l : j.at("bn")) {
    BatchNormLayer layer;
    layer.gamma = l.at("gamma").get<std::vector<double>>();
    layer.beta = l.at("beta").get<std::vector<double>>();
    layer.running_mean = l.at("running_mean").get<std::vector<double>>();
    layer.running_var = l.at("running_var").get<std::vector<double>>();
    m.bn.push_back(std::move(layer));
  }
  const auto& t = j.at("trace");
  m.trace.epochs_run = t.at("epochs_run").get<std::size_t>();
  m.trace.best_val_loss = t.at("best_val_loss").get<double>();
  m.trace.best_epoch = t.at("best_epoch").get<std::size_t>();
  return m;
}

}  // namespace igrf
