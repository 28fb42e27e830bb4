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

// Dense feed-forward classifier: layers, forward traces and input gradients.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "eegxai/errors.hpp"

namespace eegxai {

enum class Activation { kRectifier, kIdentity };

inline std::string to_string(Activation a) {
  return a == Activation::kRectifier ? "relu" : "identity";
}

inline Activation parse_activation(const std::string& name) {
  if (name == "relu") return Activation::kRectifier;
  if (name == "identity") return Activation::kIdentity;
  throw std::invalid_argument("unknown activation '" + name + "'");
}

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct DenseLayer {
  Mat<Scalar> weights;  // outputs x inputs
  Vec<Scalar> biases;
  Activation activation = Activation::kRectifier;

  Eigen::Index inputs() const { return weights.cols(); }
  Eigen::Index outputs() const { return weights.rows(); }
};

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& m) {
  return m.derived().array().isFinite().all();
}

template <typename Scalar, typename Derived>
void apply_activation(Activation a, Eigen::MatrixBase<Derived>& z) {
  if (a == Activation::kRectifier) z = z.cwiseMax(Scalar(0));
}

// Immutable stack of dense layers. Hidden layers are rectifiers and the last
// layer is linear, producing class logits.
template <typename Scalar>
class Network {
 public:
  using Layer = DenseLayer<Scalar>;

  Network() = default;

  explicit Network(std::vector<Layer> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw ShapeError("network needs at least one layer");
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const Layer& layer = layers_[l];
      if (layer.biases.size() != layer.outputs())
        throw ShapeError("layer " + std::to_string(l) + ": bias length " +
                         std::to_string(layer.biases.size()) + " != outputs " +
                         std::to_string(layer.outputs()));
      if (layer.inputs() == 0 || layer.outputs() == 0)
        throw ShapeError("layer " + std::to_string(l) + " has an empty dimension");
      if (l > 0 && layer.inputs() != layers_[l - 1].outputs())
        throw ShapeError("layer " + std::to_string(l) + " expects " +
                         std::to_string(layer.inputs()) + " inputs but layer " +
                         std::to_string(l - 1) + " produces " +
                         std::to_string(layers_[l - 1].outputs()));
      if (!all_finite(layer.weights) || !all_finite(layer.biases))
        throw DomainError("layer " + std::to_string(l) + " has non-finite parameters");
      bool last = l + 1 == layers_.size();
      if (last && layer.activation != Activation::kIdentity)
        throw ShapeError("final layer must be linear (identity activation)");
    }
  }

  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t depth() const { return layers_.size(); }
  Eigen::Index n_inputs() const { return layers_.front().inputs(); }
  Eigen::Index n_classes() const { return layers_.back().outputs(); }

  template <typename Other>
  Network<Other> cast() const {
    std::vector<DenseLayer<Other>> out;
    for (const Layer& l : layers_)
      out.push_back({l.weights.template cast<Other>(), l.biases.template cast<Other>(), l.activation});
    return Network<Other>(std::move(out));
  }

 private:
  std::vector<Layer> layers_;
};

template <typename Scalar>
struct ForwardTrace {
  Vec<Scalar> input;
  std::vector<Vec<Scalar>> pre_activations;
  std::vector<Vec<Scalar>> post_activations;
  Vec<Scalar> logits;
  Vec<Scalar> probabilities;
};

template <typename Scalar>
struct Prediction {
  Eigen::Index label = 0;
  Vec<Scalar> probabilities;
};

template <typename Derived>
Vec<typename Derived::Scalar> softmax(const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  Vec<Scalar> p = (logits.array() - logits.maxCoeff()).exp().matrix();
  p /= p.sum();
  return p;
}

// Column-wise softmax of a classes x samples logit matrix.
template <typename Derived>
Mat<typename Derived::Scalar> softmax_columns(const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  Mat<Scalar> p = (logits.rowwise() - logits.colwise().maxCoeff()).array().exp().matrix();
  p.array().rowwise() /= p.colwise().sum().array();
  return p;
}

// First index of the maximum; ties resolve toward the lowest index.
template <typename Derived>
Eigen::Index argmax(const Eigen::MatrixBase<Derived>& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v(i) > v(best)) best = i;
  return best;
}

template <typename Scalar, typename Derived>
void check_input(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& x) {
  if (x.size() != net.n_inputs())
    throw ShapeError("input has " + std::to_string(x.size()) + " features, network expects " +
                     std::to_string(net.n_inputs()));
  if (!all_finite(x)) throw DomainError("input contains non-finite values");
}

template <typename Scalar>
void check_class(const Network<Scalar>& net, Eigen::Index cls) {
  if (cls < 0 || cls >= net.n_classes())
    throw std::out_of_range("class " + std::to_string(cls) + " out of range [0, " +
                            std::to_string(net.n_classes()) + ")");
}

template <typename Scalar, typename Derived>
ForwardTrace<Scalar> forward(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& x) {
  check_input(net, x);
  ForwardTrace<Scalar> trace;
  trace.input = x;
  const Vec<Scalar>* a = &trace.input;
  for (const auto& layer : net.layers()) {
    Vec<Scalar> z = layer.weights * *a + layer.biases;
    Vec<Scalar> h = z;
    apply_activation<Scalar>(layer.activation, h);
    trace.pre_activations.push_back(std::move(z));
    trace.post_activations.push_back(std::move(h));
    a = &trace.post_activations.back();
  }
  trace.logits = trace.post_activations.back();
  trace.probabilities = softmax(trace.logits);
  return trace;
}

// Logits only, no trace and no validation. Used on hot paths.
template <typename Scalar, typename Derived>
Vec<Scalar> logits(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& x) {
  Vec<Scalar> a = x;
  for (const auto& layer : net.layers()) {
    Vec<Scalar> z = layer.weights * a + layer.biases;
    apply_activation<Scalar>(layer.activation, z);
    a = std::move(z);
  }
  return a;
}

// Logits for a batch stored column-wise (features x samples).
template <typename Scalar, typename Derived>
Mat<Scalar> logits_batch(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& inputs) {
  if (inputs.rows() != net.n_inputs())
    throw ShapeError("batch has " + std::to_string(inputs.rows()) +
                     " feature rows, network expects " + std::to_string(net.n_inputs()));
  Mat<Scalar> a = inputs;
  for (const auto& layer : net.layers()) {
    Mat<Scalar> z = layer.weights * a;
    z.colwise() += layer.biases;
    apply_activation<Scalar>(layer.activation, z);
    a = std::move(z);
  }
  return a;
}

template <typename Scalar, typename Derived>
Prediction<Scalar> predict(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& x) {
  auto trace = forward(net, x);
  return {argmax(trace.logits), std::move(trace.probabilities)};
}

// d logit_cls / d x by reverse accumulation through a recorded trace. The
// rectifier derivative at exactly zero is taken as zero.
template <typename Scalar>
Vec<Scalar> input_gradient(const Network<Scalar>& net, const ForwardTrace<Scalar>& trace,
                           Eigen::Index cls) {
  check_class(net, cls);
  const auto& layers = net.layers();
  Vec<Scalar> g = Vec<Scalar>::Zero(net.n_classes());
  g(cls) = Scalar(1);
  for (std::size_t l = layers.size(); l-- > 0;) {
    if (layers[l].activation == Activation::kRectifier)
      g = (trace.pre_activations[l].array() > Scalar(0)).select(g, Scalar(0));
    g = layers[l].weights.transpose() * g;
  }
  return g;
}

template <typename Scalar, typename Derived>
Vec<Scalar> input_gradient(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& x,
                           Eigen::Index cls) {
  check_class(net, cls);
  return input_gradient(net, forward(net, x), cls);
}

// Input gradients of logit_cls for a batch of inputs stored column-wise.
// Returns features x samples.
template <typename Scalar, typename Derived>
Mat<Scalar> input_gradient_batch(const Network<Scalar>& net,
                                 const Eigen::MatrixBase<Derived>& inputs, Eigen::Index cls) {
  check_class(net, cls);
  const auto& layers = net.layers();
  std::vector<Mat<Scalar>> pre;
  pre.reserve(layers.size());
  Mat<Scalar> a = inputs;
  for (const auto& layer : layers) {
    Mat<Scalar> z = layer.weights * a;
    z.colwise() += layer.biases;
    a = z;
    apply_activation<Scalar>(layer.activation, a);
    pre.push_back(std::move(z));
  }
  Mat<Scalar> g = Mat<Scalar>::Zero(net.n_classes(), inputs.cols());
  g.row(cls).setOnes();
  for (std::size_t l = layers.size(); l-- > 0;) {
    if (layers[l].activation == Activation::kRectifier)
      g = (pre[l].array() > Scalar(0)).select(g, Scalar(0));
    g = layers[l].weights.transpose() * g;
  }
  return g;
}

}  // namespace eegxai
