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

// Fixtures and independent oracles shared by the test binaries.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

#include "eegxai/nn.hpp"

namespace eegxai::testing {

using NetD = Network<double>;
using VecD = Vec<double>;

inline DenseLayer<double> dense(std::initializer_list<std::initializer_list<double>> rows,
                                std::initializer_list<double> biases, Activation act) {
  DenseLayer<double> l;
  l.weights.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double v : row) l.weights(r, c++) = v;
    ++r;
  }
  l.biases.resize(static_cast<Eigen::Index>(biases.size()));
  Eigen::Index i = 0;
  for (double b : biases) l.biases(i++) = b;
  l.activation = act;
  return l;
}

// f(x) = 3 x1 - 2 x2.
inline NetD linear_net() { return NetD({dense({{3, -2}}, {0}, Activation::kIdentity)}); }

// 2-2-1: hidden rows (1, -1), (2, 0.5), rectifier; output weights w2.
inline NetD two_two_one(double w2a = 1, double w2b = 1) {
  return NetD({dense({{1, -1}, {2, 0.5}}, {0, 0}, Activation::kRectifier),
               dense({{w2a, w2b}}, {0}, Activation::kIdentity)});
}

inline VecD vec(std::initializer_list<double> v) {
  VecD out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

struct RandomNetOptions {
  int max_hidden_layers = 2;  // total layers <= max_hidden_layers + 1
  int max_width = 16;
  int min_inputs = 2;
  int max_inputs = 16;
  int n_classes = 3;
  bool zero_bias = false;
  bool identity_hidden = false;
  bool positive_weights = false;
};

inline NetD random_net(std::mt19937_64& rng, const RandomNetOptions& o = {}) {
  std::uniform_int_distribution<int> layers_d(0, o.max_hidden_layers);
  std::uniform_int_distribution<int> width_d(2, o.max_width);
  std::uniform_int_distribution<int> in_d(o.min_inputs, o.max_inputs);
  std::uniform_real_distribution<double> w_d(o.positive_weights ? 0.0 : -1.0, 1.0);
  std::vector<int> dims = {in_d(rng)};
  const int hidden = layers_d(rng);
  for (int h = 0; h < hidden; ++h) dims.push_back(width_d(rng));
  dims.push_back(o.n_classes);
  std::vector<DenseLayer<double>> layers;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    DenseLayer<double> layer;
    layer.weights.resize(dims[l + 1], dims[l]);
    for (Eigen::Index i = 0; i < layer.weights.size(); ++i) layer.weights.data()[i] = w_d(rng);
    layer.biases.resize(dims[l + 1]);
    for (Eigen::Index i = 0; i < layer.biases.size(); ++i)
      layer.biases(i) = o.zero_bias ? 0.0 : 0.5 * w_d(rng);
    bool last = l + 2 == dims.size();
    layer.activation = last || o.identity_hidden ? Activation::kIdentity : Activation::kRectifier;
    layers.push_back(std::move(layer));
  }
  return NetD(std::move(layers));
}

inline VecD random_input(std::mt19937_64& rng, Eigen::Index d, double lo = -1, double hi = 1) {
  std::uniform_real_distribution<double> u(lo, hi);
  VecD x(d);
  for (Eigen::Index i = 0; i < d; ++i) x(i) = u(rng);
  return x;
}

// Smallest |pre-activation| over all rectifier units, computed with a plain
// layer loop.
inline double min_abs_preactivation(const NetD& net, const VecD& x) {
  double best = std::numeric_limits<double>::infinity();
  VecD a = x;
  for (const auto& layer : net.layers()) {
    VecD z = layer.weights * a + layer.biases;
    if (layer.activation == Activation::kRectifier) {
      best = std::min(best, z.cwiseAbs().minCoeff());
      a = z.cwiseMax(0.0);
    } else {
      a = z;
    }
  }
  return best;
}

// Central finite differences of logit_cls.
inline VecD finite_difference_gradient(const NetD& net, const VecD& x, Eigen::Index cls, double h = 1e-4) {
  VecD g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    VecD xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (logits(net, xp)(cls) - logits(net, xm)(cls)) / (2 * h);
  }
  return g;
}

inline double relative_error(const VecD& a, const VecD& b) {
  const double scale = std::max({a.norm(), b.norm(), 1e-12});
  return (a - b).norm() / scale;
}

// Spearman rank correlation with average ranks for ties.
inline double spearman(const VecD& a, const VecD& b) {
  auto ranks = [](const VecD& v) {
    std::vector<int> idx(static_cast<std::size_t>(v.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(), [&](int x, int y) { return v(x) < v(y); });
    VecD r(v.size());
    std::size_t i = 0;
    while (i < idx.size()) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v(idx[j + 1]) == v(idx[i])) ++j;
      const double avg = 0.5 * static_cast<double>(i + j);
      for (std::size_t k = i; k <= j; ++k) r(idx[k]) = avg;
      i = j + 1;
    }
    return r;
  };
  VecD ra = ranks(a), rb = ranks(b);
  ra.array() -= ra.mean();
  rb.array() -= rb.mean();
  return ra.dot(rb) / std::sqrt(ra.squaredNorm() * rb.squaredNorm());
}

}  // namespace eegxai::testing
