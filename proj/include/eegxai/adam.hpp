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

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>

#include "eegxai/errors.hpp"
#include "eegxai/nn.hpp"

namespace eegxai {

// Per-parameter moment estimates for Adam over a flat parameter vector.
template <typename Scalar>
struct AdamState {
  Vec<Scalar> first_moment;
  Vec<Scalar> second_moment;
  std::int64_t step_count = 0;
  Scalar beta1 = Scalar(0.9);
  Scalar beta2 = Scalar(0.999);
  Scalar epsilon = Scalar(1e-8);

  AdamState() = default;
  explicit AdamState(Eigen::Index n_params)
      : first_moment(Vec<Scalar>::Zero(n_params)), second_moment(Vec<Scalar>::Zero(n_params)) {}
};

// One bias-corrected Adam update, in place.
template <typename Scalar>
void adam_step(Eigen::Ref<Vec<Scalar>> params, const Eigen::Ref<const Vec<Scalar>>& grads,
               AdamState<Scalar>& state, Scalar lr) {
  if (grads.size() != params.size() || state.first_moment.size() != params.size() ||
      state.second_moment.size() != params.size())
    throw ShapeError("adam_step: params (" + std::to_string(params.size()) + "), grads (" +
                     std::to_string(grads.size()) + ") and moments (" +
                     std::to_string(state.first_moment.size()) + ", " +
                     std::to_string(state.second_moment.size()) + ") disagree");
  ++state.step_count;
  state.first_moment = state.beta1 * state.first_moment + (Scalar(1) - state.beta1) * grads;
  state.second_moment =
      state.beta2 * state.second_moment + (Scalar(1) - state.beta2) * grads.cwiseAbs2();
  const auto t = static_cast<Scalar>(state.step_count);
  const Scalar c1 = Scalar(1) - std::pow(state.beta1, t);
  const Scalar c2 = Scalar(1) - std::pow(state.beta2, t);
  params.array() -= lr * (state.first_moment.array() / c1) /
                    ((state.second_moment.array() / c2).sqrt() + state.epsilon);
}

}  // namespace eegxai
