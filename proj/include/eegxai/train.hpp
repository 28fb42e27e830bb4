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

// Classifier training: stratified validation split, Adam on softmax
// cross-entropy, early stopping and plateau learning-rate decay.

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "eegxai/dataset.hpp"
#include "eegxai/nn.hpp"

namespace eegxai {

struct TrainConfig {
  std::vector<int> hidden_layers = {128, 256, 128};
  double learning_rate = 0.01;
  int patience = 20;
  // Non-improving epochs before the learning rate is multiplied by plateau_factor.
  int plateau_window = 10;
  double plateau_factor = 0.1;
  double validation_fraction = 0.10;
  int max_epochs = 300;
  int batch_size = 64;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0;
  double validation_loss = 0;
  double learning_rate = 0;
};

struct LearningRateEvent {
  int epoch = 0;
  double learning_rate = 0;  // rate in effect from the next epoch on
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  std::vector<LearningRateEvent> lr_events;
  int final_epoch = 0;  // epochs actually run
  int best_epoch = 0;   // epoch whose weights are returned; 0 = initial weights
  double best_validation_loss = std::numeric_limits<double>::infinity();
  bool stopped_early = false;
  std::size_t n_train = 0;
  std::size_t n_validation = 0;
};

struct TrainResult {
  Network<double> network;
  TrainReport report;
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

// Per class, round(fraction * count) samples (at least one) go to validation.
// Both index lists are sorted. Throws StratificationError when a class in
// [0, n_classes) has no samples.
Split stratified_split(std::span<const int> labels, int n_classes, double fraction,
                       std::uint64_t seed);

// Rectifier MLP with weights ~ U(-sqrt(6 / fan_in), sqrt(6 / fan_in)) and
// zero biases.
Network<double> init_network(int n_inputs, std::span<const int> hidden, int n_classes,
                             std::uint64_t seed);

// Mean softmax cross-entropy of `net` on the given rows.
double cross_entropy(const Network<double>& net, const RowMatrix& features,
                     std::span<const int> labels);

// Returns the weights of the epoch with the lowest validation loss.
TrainResult train(const Dataset& data, const TrainConfig& config);

}  // namespace eegxai
