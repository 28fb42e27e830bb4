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

#include "eegxai/components.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "eegxai/errors.hpp"

namespace eegxai {

std::string to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kFeature: return "feature";
    case SchemeKind::kBand: return "band";
    case SchemeKind::kChannel: return "channel";
  }
  return "?";
}

SchemeKind parse_scheme(const std::string& name) {
  for (SchemeKind k : kAllSchemes)
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown component scheme '" + name + "'");
}

ComponentScheme::ComponentScheme(SchemeKind kind, Layout layout) : kind_(kind), layout_(layout) {
  if (layout.n_channels < 1 || layout.n_bands < 1) throw ShapeError("layout must have channels and bands");
  switch (kind) {
    case SchemeKind::kFeature:
      for (int f = 0; f < layout.n_features(); ++f) membership_.push_back({f});
      break;
    case SchemeKind::kBand:
      membership_.resize(static_cast<std::size_t>(layout.n_bands));
      for (int c = 0; c < layout.n_channels; ++c)
        for (int b = 0; b < layout.n_bands; ++b)
          membership_[static_cast<std::size_t>(b)].push_back(layout.feature(c, b));
      break;
    case SchemeKind::kChannel:
      membership_.resize(static_cast<std::size_t>(layout.n_channels));
      for (int c = 0; c < layout.n_channels; ++c)
        for (int b = 0; b < layout.n_bands; ++b)
          membership_[static_cast<std::size_t>(c)].push_back(layout.feature(c, b));
      break;
  }
}

ComponentRelevance aggregate(const Eigen::Ref<const Eigen::VectorXd>& values, const ComponentScheme& scheme) {
  if (values.size() != scheme.n_features())
    throw ShapeError("relevance map has " + std::to_string(values.size()) + " features, scheme covers " +
                     std::to_string(scheme.n_features()));
  ComponentRelevance out{scheme.kind(), Eigen::VectorXd(scheme.n_components())};
  for (int c = 0; c < scheme.n_components(); ++c) {
    double sum = 0;
    for (int f : scheme.members(c)) sum += values(f);
    out.scores(c) = sum / static_cast<double>(scheme.members(c).size());
  }
  return out;
}

ComponentRanking rank_components(const ComponentRelevance& rel, RankDirection direction, bool by_magnitude) {
  const Eigen::Index n = rel.scores.size();
  std::vector<double> key(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) key[static_cast<std::size_t>(i)] = by_magnitude ? std::abs(rel.scores(i)) : rel.scores(i);
  ComponentRanking out{std::vector<int>(static_cast<std::size_t>(n)), direction};
  std::iota(out.order.begin(), out.order.end(), 0);
  if (direction == RankDirection::kDescending)
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](int a, int b) { return key[static_cast<std::size_t>(a)] > key[static_cast<std::size_t>(b)]; });
  else
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](int a, int b) { return key[static_cast<std::size_t>(a)] < key[static_cast<std::size_t>(b)]; });
  return out;
}

ComponentRelevance mean_relevance(std::span<const ComponentRelevance> maps) {
  if (maps.empty()) throw std::invalid_argument("mean_relevance: empty list");
  ComponentRelevance out{maps.front().scheme, Eigen::VectorXd::Zero(maps.front().scores.size())};
  for (const auto& m : maps) {
    if (m.scheme != out.scheme || m.scores.size() != out.scores.size())
      throw ShapeError("mean_relevance: maps use different schemes");
    out.scores += m.scores;
  }
  out.scores /= static_cast<double>(maps.size());
  return out;
}

}  // namespace eegxai
