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

// Feature, band and channel views of relevance; ranking and averaging.

#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

#include "eegxai/layout.hpp"

namespace eegxai {

enum class SchemeKind { kFeature, kBand, kChannel };

inline constexpr std::array<SchemeKind, 3> kAllSchemes = {SchemeKind::kFeature, SchemeKind::kBand,
                                                          SchemeKind::kChannel};

std::string to_string(SchemeKind kind);
SchemeKind parse_scheme(const std::string& name);

// Partition of the feature indices into components.
class ComponentScheme {
 public:
  ComponentScheme(SchemeKind kind, Layout layout);

  SchemeKind kind() const { return kind_; }
  const Layout& layout() const { return layout_; }
  int n_components() const { return static_cast<int>(membership_.size()); }
  int n_features() const { return layout_.n_features(); }
  const std::vector<int>& members(int component) const { return membership_.at(static_cast<std::size_t>(component)); }
  const std::vector<std::vector<int>>& membership() const { return membership_; }

 private:
  SchemeKind kind_;
  Layout layout_;
  std::vector<std::vector<int>> membership_;
};

struct ComponentRelevance {
  SchemeKind scheme = SchemeKind::kFeature;
  Eigen::VectorXd scores;
};

enum class RankDirection { kDescending, kAscending };

struct ComponentRanking {
  std::vector<int> order;
  RankDirection direction = RankDirection::kDescending;
};

// Mean relevance of each component's member features.
ComponentRelevance aggregate(const Eigen::Ref<const Eigen::VectorXd>& values, const ComponentScheme& scheme);

// Stable sort by score (or |score| when by_magnitude); ties go to the lower
// component index in both directions.
ComponentRanking rank_components(const ComponentRelevance& rel, RankDirection direction,
                                 bool by_magnitude = false);

// Elementwise mean; throws on an empty list or mixed schemes.
ComponentRelevance mean_relevance(std::span<const ComponentRelevance> maps);

}  // namespace eegxai
