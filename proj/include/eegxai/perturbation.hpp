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

// Perturbation curves (MoRF, LeRF, single component), AOPC / ABPC and the
// intra/inter-session evaluation protocol.

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eegxai/attribution.hpp"
#include "eegxai/components.hpp"
#include "eegxai/dataset.hpp"
#include "eegxai/nn.hpp"

namespace eegxai {

enum class CurveKind { kMorf, kLerf, kSingleComponent };
enum class RelevanceMode { kReal, kPresumed, kRandom };
enum class SessionMode { kIntra, kInter };
// Classifier output tracked along a curve: softmax probability or logit of
// the originally predicted class.
enum class ScoreKind { kProbability, kLogit };

std::string to_string(CurveKind k);
std::string to_string(RelevanceMode m);
std::string to_string(SessionMode m);
std::string to_string(ScoreKind s);
CurveKind parse_curve_kind(const std::string& s);
RelevanceMode parse_relevance_mode(const std::string& s);
SessionMode parse_session_mode(const std::string& s);
ScoreKind parse_score_kind(const std::string& s);

inline const std::string kRandomMethod = "random";

struct PerturbationCurve {
  std::string method;
  SchemeKind scheme = SchemeKind::kFeature;
  CurveKind direction = CurveKind::kMorf;
  RelevanceMode relevance_mode = RelevanceMode::kReal;
  SessionMode session_mode = SessionMode::kIntra;
  // Index k = 0..K; entry 0 is the unperturbed input.
  std::vector<double> accuracy;
  std::vector<double> mean_score;
  std::size_t n_samples = 0;

  int steps() const { return static_cast<int>(accuracy.size()) - 1; }
};

// Input after the first k components of `ranking` were set to zero.
Eigen::VectorXd remove_components(const Eigen::Ref<const Eigen::VectorXd>& x, const ComponentRanking& ranking,
                                  const ComponentScheme& scheme, int k);

// At step k the first k components of each sample's ranking are zeroed.
// `rankings` holds one ranking per sample, or a single shared ranking.
// `labels` are the original predictions; every sample must be classified as
// its label before perturbation (ProtocolError otherwise).
PerturbationCurve perturbation_curve(const Network<double>& net, const RowMatrix& samples,
                                     std::span<const int> labels, std::span<const ComponentRanking> rankings,
                                     const ComponentScheme& scheme, CurveKind direction,
                                     ScoreKind score = ScoreKind::kProbability);

// At step k >= 1 each input keeps only the k-th component of its ranking.
PerturbationCurve single_component_curve(const Network<double>& net, const RowMatrix& samples,
                                         std::span<const int> labels,
                                         std::span<const ComponentRanking> rankings,
                                         const ComponentScheme& scheme,
                                         ScoreKind score = ScoreKind::kProbability);

// (1 / (K + 1)) * sum_k (score[0] - score[k]).
double aopc(const PerturbationCurve& curve);
// (1 / (K + 1)) * sum_k (lerf[k] - morf[k]); positive when MoRF drops faster.
double abpc(const PerturbationCurve& morf, const PerturbationCurve& lerf);

struct CurveKey {
  std::string method;
  SchemeKind scheme = SchemeKind::kFeature;
  CurveKind direction = CurveKind::kMorf;
  RelevanceMode relevance_mode = RelevanceMode::kReal;
  SessionMode session_mode = SessionMode::kIntra;
  auto operator<=>(const CurveKey&) const = default;
};

struct MetricKey {
  std::string method;
  SchemeKind scheme = SchemeKind::kFeature;
  SessionMode session_mode = SessionMode::kIntra;
  RelevanceMode relevance_mode = RelevanceMode::kReal;
  auto operator<=>(const MetricKey&) const = default;
};

struct Metrics {
  double aopc = 0;
  double abpc = 0;
};

struct ExperimentResult {
  std::map<CurveKey, PerturbationCurve> curves;
  std::map<MetricKey, Metrics> metrics;
  std::map<SessionMode, std::size_t> n_samples;
  std::uint64_t seed = 0;

  const PerturbationCurve& curve(const CurveKey& key) const;
  const Metrics& metric(const MetricKey& key) const;
  // Appends another result's entries; throws on duplicate keys.
  void merge(const ExperimentResult& other);
};

struct StoredRelevance {
  int target_class = 0;
  Eigen::VectorXd values;
};

// Precomputed relevance keyed by (method, sample id).
using RelevanceStore = std::map<std::pair<Method, std::size_t>, StoredRelevance>;

struct ProtocolConfig {
  AttributionParams attribution;
  // Rank by |relevance| instead of signed relevance.
  bool abs_relevance = false;
  ScoreKind score = ScoreKind::kProbability;
  // Average training relevance per class and rank each sample with its own
  // class's average.
  bool presumed_per_class = false;
  bool include_random = true;
  std::vector<CurveKind> curve_kinds = {CurveKind::kMorf, CurveKind::kLerf, CurveKind::kSingleComponent};
  std::vector<RelevanceMode> relevance_modes = {RelevanceMode::kReal, RelevanceMode::kPresumed};
  // Caps on the number of correctly classified samples used; 0 = all.
  std::size_t max_eval_samples = 0;
  std::size_t max_train_samples = 0;
  std::uint64_t seed = 0;
  // Optional relevance computed earlier (e.g. loaded from a relevance file);
  // entries whose target class differs from the sample label are ignored.
  const RelevanceStore* precomputed = nullptr;
};

// Relevance of every row of `data` for its own label.
std::vector<Eigen::VectorXd> compute_relevance(const Network<double>& net, const Dataset& data, Method method,
                                               const AttributionParams& params,
                                               const RelevanceStore* precomputed = nullptr);

// Runs every (method, scheme, relevance mode, curve kind) combination on the
// correctly classified part of `eval_data`. The session mode is intra when
// eval_data comes from the training sessions and inter when the sessions are
// disjoint.
ExperimentResult run_protocol(const Network<double>& net, const Dataset& train_data, const Dataset& eval_data,
                              std::span<const Method> methods, std::span<const SchemeKind> schemes,
                              const ProtocolConfig& config);

}  // namespace eegxai
