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

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "eegxai/layout.hpp"
#include "eegxai/nn.hpp"

namespace eegxai {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Labeled DE-feature vectors tagged with subject, session and trial. Labels
// follow the SEED convention 0 = negative, 1 = neutral, 2 = positive.
struct Dataset {
  Layout layout;
  int n_classes = 3;
  RowMatrix features;  // samples x features
  std::vector<int> labels;
  std::vector<int> subjects;
  std::vector<int> sessions;
  std::vector<int> trials;
  // Row index in the originating file; preserved by subset().
  std::vector<std::size_t> sample_ids;

  std::size_t size() const { return labels.size(); }
  bool empty() const { return labels.empty(); }
  Eigen::Index n_features() const { return features.cols(); }

  // Throws ShapeError / DomainError when an invariant is broken.
  void validate() const;

  Dataset subset(std::span<const std::size_t> rows) const;
  Dataset session(int session_id) const;
  Dataset trials_in(int session_id, int first_trial, int last_trial) const;
  std::vector<int> session_ids() const;
};

// Sample-major dataset with a given layout and no rows.
Dataset make_empty_dataset(Layout layout, int n_classes = 3);

Dataset read_dataset(std::istream& in);
Dataset load_dataset(const std::filesystem::path& path);
void write_dataset(const Dataset& data, std::ostream& out);
void save_dataset(const Dataset& data, const std::filesystem::path& path);

// Samples whose predicted label equals the stored label, order preserved.
Dataset filter_correct(const Network<double>& net, const Dataset& data);

// Predicted labels for every row, batched.
std::vector<int> predict_labels(const Network<double>& net, const RowMatrix& features);

}  // namespace eegxai
