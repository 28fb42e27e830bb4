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

#include "eegxai/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "eegxai/errors.hpp"

namespace eegxai {
namespace {

using Pattern = std::vector<int>;  // one +/-1 sign per class

Pattern draw_pattern(std::mt19937_64& rng, int n_classes) {
  std::bernoulli_distribution coin(0.5);
  Pattern p(static_cast<std::size_t>(n_classes));
  while (true) {
    for (int& s : p) s = coin(rng) ? 1 : -1;
    if (std::any_of(p.begin(), p.end(), [&](int s) { return s != p.front(); })) return p;
  }
}

}  // namespace

void SynthConfig::validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument("synth config: " + m); };
  if (n_channels < 1 || n_bands < 1 || n_bands > 5) fail("need n_channels >= 1 and 1 <= n_bands <= 5");
  if (n_classes < 2) fail("need at least two classes");
  if (samples_per_class_per_session < 1) fail("samples_per_class_per_session must be positive");
  if (n_sessions < 1) fail("n_sessions must be positive");
  if (trials_per_session < n_classes || trials_per_session % n_classes != 0)
    fail("trials_per_session must be a positive multiple of n_classes");
  if (n_informative < 1 || n_informative > n_channels * n_bands)
    fail("n_informative must lie in [1, n_channels * n_bands]");
  if (!(class_separation > 0) || !std::isfinite(class_separation)) fail("class_separation must be positive");
  if (!(session_shift >= 0 && session_shift <= 1)) fail("session_shift must lie in [0, 1]");
  if (!(noise_sigma > 0) || !std::isfinite(noise_sigma)) fail("noise_sigma must be positive");
}

std::pair<Dataset, GroundTruth> generate_synthetic(const SynthConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  const Layout layout{cfg.n_channels, cfg.n_bands};
  const int d = layout.n_features();

  std::vector<int> all(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) all[static_cast<std::size_t>(i)] = i;
  std::shuffle(all.begin(), all.end(), rng);
  std::vector<int> informative(all.begin(), all.begin() + cfg.n_informative);
  std::sort(informative.begin(), informative.end());

  std::vector<Pattern> base;
  for (std::size_t j = 0; j < informative.size(); ++j) base.push_back(draw_pattern(rng, cfg.n_classes));

  const auto n_shift = static_cast<std::size_t>(std::lround(cfg.session_shift * cfg.n_informative));

  GroundTruth truth;
  std::vector<std::vector<Pattern>> patterns;  // per session
  for (int s = 1; s <= cfg.n_sessions; ++s) {
    std::vector<Pattern> p = base;
    std::vector<int> shifted;
    if (s > 1 && n_shift > 0) {
      std::vector<std::size_t> slots(informative.size());
      for (std::size_t j = 0; j < slots.size(); ++j) slots[j] = j;
      std::shuffle(slots.begin(), slots.end(), rng);
      slots.resize(n_shift);
      std::sort(slots.begin(), slots.end());
      for (std::size_t j : slots) {
        do {
          p[j] = draw_pattern(rng, cfg.n_classes);
        } while (p[j] == base[j]);
        shifted.push_back(informative[j]);
      }
    }
    Mat<double> means = Mat<double>::Zero(cfg.n_classes, d);
    for (std::size_t j = 0; j < informative.size(); ++j)
      for (int c = 0; c < cfg.n_classes; ++c)
        means(c, informative[j]) = cfg.class_separation * p[j][static_cast<std::size_t>(c)];
    truth.informative[s] = informative;
    truth.shifted[s] = shifted;
    truth.class_means[s] = means;
    patterns.push_back(std::move(p));
  }

  const int trials_per_class = cfg.trials_per_session / cfg.n_classes;
  const auto n_total = static_cast<Eigen::Index>(cfg.n_sessions) * cfg.n_classes *
                       cfg.samples_per_class_per_session;
  Dataset data = make_empty_dataset(layout, cfg.n_classes);
  data.features.resize(n_total, d);
  std::normal_distribution<double> noise(0.0, cfg.noise_sigma);
  Eigen::Index row = 0;
  for (int s = 1; s <= cfg.n_sessions; ++s) {
    const Mat<double>& means = truth.class_means[s];
    for (int t = 1; t <= cfg.trials_per_session; ++t) {
      const int label = (t - 1) % cfg.n_classes;
      const int k = (t - 1) / cfg.n_classes;  // index of this trial among its class's trials
      const int count = cfg.samples_per_class_per_session / trials_per_class +
                        (k < cfg.samples_per_class_per_session % trials_per_class ? 1 : 0);
      for (int i = 0; i < count; ++i, ++row) {
        for (int f = 0; f < d; ++f) data.features(row, f) = means(label, f) + noise(rng);
        data.labels.push_back(label);
        data.subjects.push_back(cfg.subject);
        data.sessions.push_back(s);
        data.trials.push_back(t);
        data.sample_ids.push_back(static_cast<std::size_t>(row));
      }
    }
  }
  return {std::move(data), std::move(truth)};
}

}  // namespace eegxai
