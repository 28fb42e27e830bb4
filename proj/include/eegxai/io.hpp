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

// File formats: model JSON, ground-truth sidecar, training report, and the
// relevance / component / curve / metric CSV tables.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "eegxai/attribution.hpp"
#include "eegxai/components.hpp"
#include "eegxai/perturbation.hpp"
#include "eegxai/synthetic.hpp"
#include "eegxai/train.hpp"

namespace eegxai {

// {n_inputs, n_classes, layers: [{rows, cols, weights (row-major), biases, activation}]}
nlohmann::json network_to_json(const Network<double>& net);
Network<double> network_from_json(const nlohmann::json& j);
void save_network(const Network<double>& net, const std::filesystem::path& path);
Network<double> load_network(const std::filesystem::path& path);

// {"<session>": {informative_indices, shifted_indices, class_means}}
nlohmann::json ground_truth_to_json(const GroundTruth& truth);
GroundTruth ground_truth_from_json(const nlohmann::json& j);
nlohmann::json train_report_to_json(const TrainReport& report);

struct RelevanceRecord {
  Method method = Method::kSaliency;
  std::size_t sample_id = 0;
  int target_class = 0;
  Eigen::VectorXd values;
};

// method,sample_id,target_class,f000,...
void write_relevance_csv(std::ostream& out, std::span<const RelevanceRecord> records, int n_features);
std::vector<RelevanceRecord> read_relevance_csv(std::istream& in);
RelevanceStore make_relevance_store(std::span<const RelevanceRecord> records);

// scheme,component_id,score
void write_component_csv(std::ostream& out, std::span<const ComponentRelevance> rows);

// method,scheme,direction,relevance_mode,session_mode,step,accuracy,mean_score
void write_curves_csv(std::ostream& out, const ExperimentResult& result);

struct MetricRow {
  std::string method;
  std::string scheme;
  std::string session_mode;
  std::string relevance_mode;
  double aopc = 0;
  double abpc = 0;
};

// method,scheme,session_mode,relevance_mode,aopc,abpc
void write_metrics_csv(std::ostream& out, const ExperimentResult& result);
std::vector<MetricRow> read_metrics_csv(std::istream& in);

// One line per metric key with run count, mean and sample standard deviation
// of AOPC and ABPC. Independent of the order of `rows`.
void write_summary_csv(std::ostream& out, std::span<const MetricRow> rows);

}  // namespace eegxai
