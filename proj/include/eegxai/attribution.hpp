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

// Per-feature relevance for dense rectifier networks. Every method explains
// the pre-softmax logit of the requested class.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "eegxai/errors.hpp"
#include "eegxai/nn.hpp"

namespace eegxai {

enum class Method { kSaliency, kGuidedBackprop, kLrpZ, kIntegratedGradients, kDeepLift, kOcclusion };

// The five explainers compared by the evaluation protocol. Occlusion is only
// used as a brute-force reference.
inline constexpr std::array<Method, 5> kExplainers = {Method::kSaliency, Method::kGuidedBackprop,
                                                      Method::kLrpZ, Method::kIntegratedGradients,
                                                      Method::kDeepLift};

inline std::string to_string(Method m) {
  switch (m) {
    case Method::kSaliency: return "saliency";
    case Method::kGuidedBackprop: return "guided_bp";
    case Method::kLrpZ: return "lrp_z";
    case Method::kIntegratedGradients: return "integrated_gradients";
    case Method::kDeepLift: return "deeplift";
    case Method::kOcclusion: return "occlusion";
  }
  return "?";
}

inline Method parse_method(const std::string& name) {
  for (Method m : {Method::kSaliency, Method::kGuidedBackprop, Method::kLrpZ,
                   Method::kIntegratedGradients, Method::kDeepLift, Method::kOcclusion})
    if (to_string(m) == name) return m;
  throw std::invalid_argument("unknown attribution method '" + name + "'");
}

template <typename Scalar>
struct RelevanceMap {
  Vec<Scalar> values;
  Eigen::Index target_class = 0;
  Method method = Method::kSaliency;
};

struct AttributionParams {
  int ig_steps = 50;
  double lrp_epsilon = 1e-6;
  // Reference input for integrated gradients and DeepLIFT; empty means zeros.
  Vec<double> baseline;
};

namespace detail {

template <typename Scalar>
Vec<Scalar> resolve_baseline(const Network<Scalar>& net, const Vec<Scalar>& baseline) {
  if (baseline.size() == 0) return Vec<Scalar>::Zero(net.n_inputs());
  if (baseline.size() != net.n_inputs())
    throw ShapeError("baseline has " + std::to_string(baseline.size()) + " features, network expects " +
                     std::to_string(net.n_inputs()));
  if (!all_finite(baseline)) throw DomainError("baseline contains non-finite values");
  return baseline;
}

}  // namespace detail

template <typename Scalar, typename Derived>
RelevanceMap<Scalar> saliency(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& x,
                              Eigen::Index cls) {
  return {input_gradient(net, x, cls).cwiseAbs(), cls, Method::kSaliency};
}

// Reverse pass in which each rectifier passes the backward signal only where
// both its forward pre-activation and the incoming signal are positive.
template <typename Scalar, typename Derived>
RelevanceMap<Scalar> guided_backprop(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& x,
                                     Eigen::Index cls) {
  check_class(net, cls);
  const auto trace = forward(net, x);
  const auto& layers = net.layers();
  Vec<Scalar> g = Vec<Scalar>::Zero(net.n_classes());
  g(cls) = Scalar(1);
  for (std::size_t l = layers.size(); l-- > 0;) {
    if (layers[l].activation == Activation::kRectifier)
      g = (trace.pre_activations[l].array() > Scalar(0) && g.array() >= Scalar(0)).select(g, Scalar(0));
    g = layers[l].weights.transpose() * g;
  }
  return {std::move(g), cls, Method::kGuidedBackprop};
}

// z-rule with a sign-matched stabilizer:
//   R_j = sum_k a_j w_kj / (z_k + sign(z_k) eps) R_k,   z_k = sum_j a_j w_kj + b_k.
// Relevance starts as the target logit on the target unit. Biases only enter
// through z_k, so relevance is conserved exactly only for zero-bias networks
// (up to the stabilizer).
template <typename Scalar, typename Derived>
RelevanceMap<Scalar> lrp_z(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& x,
                           Eigen::Index cls, Scalar epsilon = Scalar(1e-6)) {
  check_class(net, cls);
  if (!(epsilon > Scalar(0))) throw std::invalid_argument("lrp_z: epsilon must be positive");
  const auto trace = forward(net, x);
  const auto& layers = net.layers();
  Vec<Scalar> r = Vec<Scalar>::Zero(net.n_classes());
  r(cls) = trace.logits(cls);
  for (std::size_t l = layers.size(); l-- > 0;) {
    const Vec<Scalar>& a = l == 0 ? trace.input : trace.post_activations[l - 1];
    const Vec<Scalar>& z = trace.pre_activations[l];
    const Vec<Scalar> denom =
        (z.array() >= Scalar(0)).select(z.array() + epsilon, z.array() - epsilon).matrix();
    const Vec<Scalar> s = r.cwiseQuotient(denom);
    r = a.cwiseProduct(layers[l].weights.transpose() * s);
    if (!all_finite(r)) throw NumericError("lrp_z: non-finite relevance at layer " + std::to_string(l));
  }
  return {std::move(r), cls, Method::kLrpZ};
}

// Midpoint Riemann approximation of the path integral from the baseline to x.
template <typename Scalar, typename Derived>
RelevanceMap<Scalar> integrated_gradients(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& x,
                                          Eigen::Index cls, const Vec<Scalar>& baseline = {},
                                          int steps = 50) {
  check_input(net, x);
  check_class(net, cls);
  if (steps < 1) throw std::invalid_argument("integrated_gradients: steps must be >= 1");
  const Vec<Scalar> ref = detail::resolve_baseline(net, baseline);
  const Vec<Scalar> delta = x - ref;
  Mat<Scalar> path(net.n_inputs(), steps);
  for (int s = 0; s < steps; ++s)
    path.col(s) = ref + (Scalar(s) + Scalar(0.5)) / Scalar(steps) * delta;
  const Vec<Scalar> mean_grad = input_gradient_batch(net, path, cls).rowwise().mean();
  return {delta.cwiseProduct(mean_grad), cls, Method::kIntegratedGradients};
}

// DeepLIFT Rescale rule. Rectifier multipliers are delta_post / delta_pre,
// falling back to the local derivative when |delta_pre| <= 1e-9; linear maps
// pass multipliers through their weights. The result sums to
// logit(x) - logit(baseline).
template <typename Scalar, typename Derived>
RelevanceMap<Scalar> deeplift_rescale(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& x,
                                      Eigen::Index cls, const Vec<Scalar>& baseline = {}) {
  check_class(net, cls);
  const Vec<Scalar> ref = detail::resolve_baseline(net, baseline);
  const auto actual = forward(net, x);
  const auto reference = forward(net, ref);
  const auto& layers = net.layers();
  Vec<Scalar> m = Vec<Scalar>::Zero(net.n_classes());
  m(cls) = Scalar(1);
  for (std::size_t l = layers.size(); l-- > 0;) {
    if (layers[l].activation == Activation::kRectifier) {
      const auto& pre = actual.pre_activations[l];
      const auto d_pre = (pre - reference.pre_activations[l]).array();
      const auto d_post = (actual.post_activations[l] - reference.post_activations[l]).array();
      const auto local = (pre.array() > Scalar(0)).template cast<Scalar>();
      const Vec<Scalar> rescale = (d_pre.abs() > Scalar(1e-9)).select(d_post / d_pre, local).matrix();
      m = m.cwiseProduct(rescale);
    }
    m = layers[l].weights.transpose() * m;
    if (!all_finite(m)) throw NumericError("deeplift: non-finite multiplier at layer " + std::to_string(l));
  }
  return {m.cwiseProduct(actual.input - ref), cls, Method::kDeepLift};
}

// Brute force: drop in the target logit when feature i alone is set to zero.
template <typename Scalar, typename Derived>
RelevanceMap<Scalar> occlusion(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& x,
                               Eigen::Index cls) {
  check_input(net, x);
  check_class(net, cls);
  const Eigen::Index d = net.n_inputs();
  Mat<Scalar> occluded = x.derived().template cast<Scalar>().replicate(1, d);
  occluded.diagonal().setZero();
  const Scalar base = logits(net, x)(cls);
  Vec<Scalar> values = (Scalar(base) - logits_batch(net, occluded).row(cls).array()).matrix().transpose();
  return {std::move(values), cls, Method::kOcclusion};
}

template <typename Scalar, typename Derived>
RelevanceMap<Scalar> explain(Method method, const Network<Scalar>& net,
                             const Eigen::MatrixBase<Derived>& x, Eigen::Index cls,
                             const AttributionParams& params = {}) {
  const Vec<Scalar> baseline = params.baseline.template cast<Scalar>();
  switch (method) {
    case Method::kSaliency: return saliency(net, x, cls);
    case Method::kGuidedBackprop: return guided_backprop(net, x, cls);
    case Method::kLrpZ: return lrp_z(net, x, cls, static_cast<Scalar>(params.lrp_epsilon));
    case Method::kIntegratedGradients: return integrated_gradients(net, x, cls, baseline, params.ig_steps);
    case Method::kDeepLift: return deeplift_rescale(net, x, cls, baseline);
    case Method::kOcclusion: return occlusion(net, x, cls);
  }
  throw std::invalid_argument("unknown attribution method");
}

}  // namespace eegxai
