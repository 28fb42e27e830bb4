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

// Desk-scale stand-in for SEED DE features with planted relevant components.

#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "eegxai/dataset.hpp"

namespace eegxai {

struct SynthConfig {
  int n_channels = 62;
  int n_bands = 5;
  int n_classes = 3;
  int samples_per_class_per_session = 600;
  int n_sessions = 3;
  int trials_per_session = 15;
  int subject = 1;
  // Number of planted class-informative features.
  int n_informative = 20;
  double class_separation = 1.0;
  // Fraction of informative features whose class sign pattern is re-drawn in
  // every session after the first.
  double session_shift = 0.5;
  double noise_sigma = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GroundTruth {
  // Informative feature indices (sorted), per session.
  std::map<int, std::vector<int>> informative;
  // Features whose pattern was re-drawn relative to session 1, per session.
  std::map<int, std::vector<int>> shifted;
  // classes x features mean matrix, per session.
  std::map<int, Mat<double>> class_means;
};

// Every sample is its class mean (class_separation times a +/-1 pattern on the
// informative set, zero elsewhere) plus N(0, noise_sigma^2) noise on every
// feature. Each informative feature's pattern is non-constant across classes;
// a re-drawn pattern always differs from the session-1 pattern. Trial t of a
// session carries label (t - 1) % n_classes.
std::pair<Dataset, GroundTruth> generate_synthetic(const SynthConfig& cfg);

}  // namespace eegxai
