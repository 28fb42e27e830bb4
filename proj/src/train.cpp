/*
 * Copyright 2026 The eegxai Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "eegxai/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "eegxai/adam.hpp"
#include "eegxai/errors.hpp"

namespace eegxai {
namespace {

// Flat parameter vector with per-layer views. Each layer stores its weights
// column-major followed by its biases.
struct ParamLayout {
  struct Block {
    Eigen::Index rows, cols, weight_offset, bias_offset;
  };
  std::vector<Block> blocks;
  Eigen::Index size = 0;

  ParamLayout(int n_inputs, std::span<const int> hidden, int n_classes) {
    std::vector<int> dims = {n_inputs};
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(n_classes);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
      Block b{dims[l + 1], dims[l], size, size + Eigen::Index{dims[l + 1]} * dims[l]};
      size = b.bias_offset + b.rows;
      blocks.push_back(b);
    }
  }

  Eigen::Map<Mat<double>> weights(Vec<double>& p, std::size_t l) const {
    return {p.data() + blocks[l].weight_offset, blocks[l].rows, blocks[l].cols};
  }
  Eigen::Map<const Mat<double>> weights(const Vec<double>& p, std::size_t l) const {
    return {p.data() + blocks[l].weight_offset, blocks[l].rows, blocks[l].cols};
  }
  Eigen::Map<Vec<double>> biases(Vec<double>& p, std::size_t l) const {
    return {p.data() + blocks[l].bias_offset, blocks[l].rows};
  }
  Eigen::Map<const Vec<double>> biases(const Vec<double>& p, std::size_t l) const {
    return {p.data() + blocks[l].bias_offset, blocks[l].rows};
  }

  Network<double> to_network(const Vec<double>& p) const {
    std::vector<DenseLayer<double>> layers;
    for (std::size_t l = 0; l < blocks.size(); ++l) {
      bool last = l + 1 == blocks.size();
      layers.push_back({weights(p, l), biases(p, l),
                        last ? Activation::kIdentity : Activation::kRectifier});
    }
    return Network<double>(std::move(layers));
  }
};

// Mean cross-entropy of a batch and, when `grad` is non-null, its gradient
// with respect to the flat parameters.
double batch_loss(const ParamLayout& layout, const Vec<double>& params, const Mat<double>& inputs,
                  std::span<const int> labels, Vec<double>* grad) {
  const std::size_t depth = layout.blocks.size();
  const auto n = inputs.cols();
  std::vector<Mat<double>> acts;  // acts[l] = input to layer l
  acts.reserve(depth + 1);
  acts.push_back(inputs);
  for (std::size_t l = 0; l < depth; ++l) {
    Mat<double> z = layout.weights(params, l) * acts.back();
    z.colwise() += layout.biases(params, l);
    if (l + 1 < depth) z = z.cwiseMax(0.0);
    acts.push_back(std::move(z));
  }
  const Mat<double>& z = acts.back();
  const Eigen::RowVectorXd zmax = z.colwise().maxCoeff();
  Mat<double> p = (z.rowwise() - zmax).array().exp().matrix();
  const Eigen::RowVectorXd norm = p.colwise().sum();
  double loss = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    loss += std::log(norm(i)) + zmax(i) - z(y, i);
  }
  loss /= static_cast<double>(n);
  if (!grad) return loss;

  p.array().rowwise() /= norm.array();
  Mat<double> delta = p;
  for (Eigen::Index i = 0; i < n; ++i) delta(labels[static_cast<std::size_t>(i)], i) -= 1.0;
  delta /= static_cast<double>(n);
  grad->setZero(layout.size);
  for (std::size_t l = depth; l-- > 0;) {
    const auto& b = layout.blocks[l];
    Eigen::Map<Mat<double>>(grad->data() + b.weight_offset, b.rows, b.cols).noalias() =
        delta * acts[l].transpose();
    Eigen::Map<Vec<double>>(grad->data() + b.bias_offset, b.rows) = delta.rowwise().sum();
    if (l > 0) {
      Mat<double> back = layout.weights(params, l).transpose() * delta;
      // acts[l] is the rectified output of layer l - 1; its derivative is
      // zero wherever the activation is not strictly positive.
      delta = (acts[l].array() > 0.0).select(back, 0.0);
    }
  }
  return loss;
}

Mat<double> gather_columns(const RowMatrix& features, std::span<const std::size_t> rows) {
  Mat<double> out(features.cols(), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.col(static_cast<Eigen::Index>(i)) = features.row(static_cast<Eigen::Index>(rows[i])).transpose();
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument("train config: " + m); };
  if (!(learning_rate > 0) || !std::isfinite(learning_rate)) fail("learning_rate must be > 0");
  if (!(validation_fraction > 0 && validation_fraction < 1)) fail("validation_fraction must lie in (0, 1)");
  if (!(plateau_factor > 0 && plateau_factor < 1)) fail("plateau_factor must lie in (0, 1)");
  if (patience < 1) fail("patience must be positive");
  if (plateau_window < 1) fail("plateau_window must be positive");
  if (max_epochs < 0) fail("max_epochs must be >= 0");
  if (batch_size < 1) fail("batch_size must be positive");
  for (int h : hidden_layers)
    if (h < 1) fail("hidden layer widths must be positive");
}

Split stratified_split(std::span<const int> labels, int n_classes, double fraction,
                       std::uint64_t seed) {
  if (!(fraction > 0 && fraction < 1))
    throw std::invalid_argument("stratified_split: fraction must lie in (0, 1)");
  if (n_classes < 1) throw std::invalid_argument("stratified_split: n_classes must be positive");
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(n_classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= n_classes)
      throw std::invalid_argument("stratified_split: label " + std::to_string(labels[i]) +
                                  " out of range");
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  std::mt19937_64 rng(seed);
  Split split;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& idx = by_class[c];
    if (idx.empty())
      throw StratificationError("stratified_split: class " + std::to_string(c) + " has no samples");
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto n_val = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(fraction * static_cast<double>(idx.size()))));
    split.validation.insert(split.validation.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val));
    split.train.insert(split.train.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_val), idx.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  return split;
}

Network<double> init_network(int n_inputs, std::span<const int> hidden, int n_classes,
                             std::uint64_t seed) {
  ParamLayout layout(n_inputs, hidden, n_classes);
  std::mt19937_64 rng(seed);
  Vec<double> params = Vec<double>::Zero(layout.size);
  for (std::size_t l = 0; l < layout.blocks.size(); ++l) {
    const double limit = std::sqrt(6.0 / static_cast<double>(layout.blocks[l].cols));
    std::uniform_real_distribution<double> u(-limit, limit);
    auto w = layout.weights(params, l);
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = u(rng);
  }
  return layout.to_network(params);
}

double cross_entropy(const Network<double>& net, const RowMatrix& features,
                     std::span<const int> labels) {
  if (features.rows() == 0) return 0;
  const Mat<double> z = logits_batch(net, features.transpose());
  double loss = 0;
  for (Eigen::Index i = 0; i < z.cols(); ++i) {
    const double m = z.col(i).maxCoeff();
    loss += std::log((z.col(i).array() - m).exp().sum()) + m - z(labels[static_cast<std::size_t>(i)], i);
  }
  return loss / static_cast<double>(z.cols());
}

TrainResult train(const Dataset& data, const TrainConfig& config) {
  config.validate();
  if (data.empty()) throw std::invalid_argument("train: dataset is empty");
  data.validate();

  const int n_inputs = static_cast<int>(data.n_features());
  const Split split = stratified_split(data.labels, data.n_classes, config.validation_fraction, config.seed);
  if (split.train.empty()) throw std::invalid_argument("train: no samples left for training after the validation split");

  ParamLayout layout(n_inputs, config.hidden_layers, data.n_classes);
  Vec<double> params(layout.size);
  {
    const Network<double> init = init_network(n_inputs, config.hidden_layers, data.n_classes, config.seed);
    for (std::size_t l = 0; l < layout.blocks.size(); ++l) {
      layout.weights(params, l) = init.layers()[l].weights;
      layout.biases(params, l) = init.layers()[l].biases;
    }
  }

  TrainReport report;
  report.n_train = split.train.size();
  report.n_validation = split.validation.size();

  const Mat<double> val_inputs = gather_columns(data.features, split.validation);
  std::vector<int> val_labels;
  for (std::size_t i : split.validation) val_labels.push_back(data.labels[i]);

  // Shuffling uses a stream independent of the split and init streams.
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  AdamState<double> adam(layout.size);
  Vec<double> grad(layout.size);
  Vec<double> best_params = params;
  double lr = config.learning_rate;
  int since_best = 0;
  int since_plateau = 0;
  std::vector<std::size_t> order = split.train;
  std::vector<int> batch_labels;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double train_loss = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      std::span<const std::size_t> rows(order.data() + start, end - start);
      batch_labels.clear();
      for (std::size_t r : rows) batch_labels.push_back(data.labels[r]);
      const double loss = batch_loss(layout, params, gather_columns(data.features, rows), batch_labels, &grad);
      if (!std::isfinite(loss) || !all_finite(grad))
        throw TrainingDivergedError("training diverged at epoch " + std::to_string(epoch));
      train_loss += loss * static_cast<double>(rows.size());
      adam_step<double>(params, grad, adam, lr);
    }
    train_loss /= static_cast<double>(order.size());
    const double val_loss = batch_loss(layout, params, val_inputs, val_labels, nullptr);
    if (!std::isfinite(val_loss) || !all_finite(params))
      throw TrainingDivergedError("training diverged at epoch " + std::to_string(epoch));

    report.epochs.push_back({epoch, train_loss, val_loss, lr});
    report.final_epoch = epoch;
    if (val_loss < report.best_validation_loss) {
      report.best_validation_loss = val_loss;
      report.best_epoch = epoch;
      best_params = params;
      since_best = 0;
      since_plateau = 0;
    } else {
      ++since_best;
      ++since_plateau;
      if (since_best >= config.patience) {
        report.stopped_early = true;
        break;
      }
      if (since_plateau >= config.plateau_window) {
        lr *= config.plateau_factor;
        since_plateau = 0;
        report.lr_events.push_back({epoch, lr});
      }
    }
  }
  return {layout.to_network(best_params), std::move(report)};
}

}  // namespace eegxai
