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

#include "eegxai/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <tuple>

#include "eegxai/errors.hpp"
#include "eegxai/format.hpp"

namespace eegxai {
namespace {

using nlohmann::json;

void expect_header(std::string_view got, std::string_view want, std::size_t line_no) {
  if (strip_cr(got) != want) throw ParseError(line_no, "expected header '" + std::string(want) + "'");
}

double number_field(std::string_view s, std::size_t line_no, const char* what) {
  auto v = parse_double(s);
  if (!v) throw ParseError(line_no, std::string(what) + " is not a number");
  return *v;
}

}  // namespace

json network_to_json(const Network<double>& net) {
  json layers = json::array();
  for (const auto& layer : net.layers()) {
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(layer.weights.size()));
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) w.push_back(layer.weights(r, c));
    std::vector<double> b(layer.biases.data(), layer.biases.data() + layer.biases.size());
    layers.push_back({{"rows", layer.outputs()},
                      {"cols", layer.inputs()},
                      {"weights", w},
                      {"biases", b},
                      {"activation", to_string(layer.activation)}});
  }
  return {{"n_inputs", net.n_inputs()}, {"n_classes", net.n_classes()}, {"layers", layers}};
}

Network<double> network_from_json(const json& j) {
  try {
    std::vector<DenseLayer<double>> layers;
    for (const auto& lj : j.at("layers")) {
      const auto rows = lj.at("rows").get<Eigen::Index>();
      const auto cols = lj.at("cols").get<Eigen::Index>();
      const auto w = lj.at("weights").get<std::vector<double>>();
      const auto b = lj.at("biases").get<std::vector<double>>();
      if (rows < 1 || cols < 1 || static_cast<Eigen::Index>(w.size()) != rows * cols)
        throw ShapeError("layer weight count does not match rows x cols");
      DenseLayer<double> layer;
      layer.weights = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          w.data(), rows, cols);
      layer.biases = Eigen::Map<const Vec<double>>(b.data(), static_cast<Eigen::Index>(b.size()));
      layer.activation = parse_activation(lj.at("activation").get<std::string>());
      layers.push_back(std::move(layer));
    }
    Network<double> net(std::move(layers));
    if (net.n_inputs() != j.at("n_inputs").get<Eigen::Index>() ||
        net.n_classes() != j.at("n_classes").get<Eigen::Index>())
      throw ShapeError("n_inputs / n_classes disagree with the layer shapes");
    return net;
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("malformed model JSON: ") + e.what());
  }
}

void save_network(const Network<double>& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model '" + path.string() + "'");
  out << network_to_json(net).dump() << '\n';
}

Network<double> load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
  return network_from_json(j);
}

json ground_truth_to_json(const GroundTruth& truth) {
  json j = json::object();
  for (const auto& [session, indices] : truth.informative) {
    const Mat<double>& means = truth.class_means.at(session);
    json rows = json::array();
    for (Eigen::Index c = 0; c < means.rows(); ++c) {
      std::vector<double> r(static_cast<std::size_t>(means.cols()));
      for (Eigen::Index f = 0; f < means.cols(); ++f) r[static_cast<std::size_t>(f)] = means(c, f);
      rows.push_back(r);
    }
    j[std::to_string(session)] = {{"informative_indices", indices},
                                  {"shifted_indices", truth.shifted.at(session)},
                                  {"class_means", rows}};
  }
  return j;
}

GroundTruth ground_truth_from_json(const json& j) {
  GroundTruth truth;
  try {
    for (const auto& [key, value] : j.items()) {
      const int session = std::stoi(key);
      truth.informative[session] = value.at("informative_indices").get<std::vector<int>>();
      truth.shifted[session] = value.at("shifted_indices").get<std::vector<int>>();
      const auto rows = value.at("class_means").get<std::vector<std::vector<double>>>();
      Mat<double> means(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
      for (std::size_t c = 0; c < rows.size(); ++c)
        for (std::size_t f = 0; f < rows[c].size(); ++f)
          means(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(f)) = rows[c][f];
      truth.class_means[session] = std::move(means);
    }
  } catch (const std::exception& e) {
    throw ParseError(0, std::string("malformed ground-truth JSON: ") + e.what());
  }
  return truth;
}

json train_report_to_json(const TrainReport& report) {
  json epochs = json::array();
  for (const auto& e : report.epochs)
    epochs.push_back({{"epoch", e.epoch},
                      {"train_loss", e.train_loss},
                      {"validation_loss", e.validation_loss},
                      {"learning_rate", e.learning_rate}});
  json events = json::array();
  for (const auto& e : report.lr_events) events.push_back({{"epoch", e.epoch}, {"learning_rate", e.learning_rate}});
  return {{"final_epoch", report.final_epoch},
          {"best_epoch", report.best_epoch},
          {"best_validation_loss", std::isfinite(report.best_validation_loss) ? json(report.best_validation_loss) : json()},
          {"stopped_early", report.stopped_early},
          {"n_train", report.n_train},
          {"n_validation", report.n_validation},
          {"epochs", epochs},
          {"lr_events", events}};
}

void write_relevance_csv(std::ostream& out, std::span<const RelevanceRecord> records, int n_features) {
  std::string buf = "method,sample_id,target_class";
  for (int f = 0; f < n_features; ++f) buf += "," + feature_column(f);
  buf += '\n';
  out << buf;
  for (const auto& r : records) {
    if (r.values.size() != n_features) throw ShapeError("relevance record width mismatch");
    buf = to_string(r.method) + ',' + std::to_string(r.sample_id) + ',' + std::to_string(r.target_class);
    for (Eigen::Index f = 0; f < r.values.size(); ++f) {
      buf += ',';
      append_double(buf, r.values(f));
    }
    buf += '\n';
    out << buf;
  }
}

std::vector<RelevanceRecord> read_relevance_csv(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  if (!std::getline(in, raw)) throw ParseError(0, "empty relevance file");
  ++line_no;
  const auto header = split(strip_cr(raw), ',');
  if (header.size() < 4 || header[0] != "method" || header[1] != "sample_id" || header[2] != "target_class")
    throw ParseError(line_no, "expected header 'method,sample_id,target_class,f000,...'");
  const std::size_t d = header.size() - 3;
  for (std::size_t f = 0; f < d; ++f)
    if (header[3 + f] != feature_column(static_cast<int>(f)))
      throw ParseError(line_no, "column " + std::to_string(3 + f) + " must be '" + feature_column(static_cast<int>(f)) + "'");
  std::vector<RelevanceRecord> out;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != header.size()) throw ParseError(line_no, "wrong column count");
    RelevanceRecord r;
    try {
      r.method = parse_method(std::string(fields[0]));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    auto id = parse_int<std::size_t>(fields[1]);
    auto cls = parse_int<int>(fields[2]);
    if (!id || !cls || *cls < 0) throw ParseError(line_no, "bad sample_id or target_class");
    r.sample_id = *id;
    r.target_class = *cls;
    r.values.resize(static_cast<Eigen::Index>(d));
    for (std::size_t f = 0; f < d; ++f) {
      r.values(static_cast<Eigen::Index>(f)) = number_field(fields[3 + f], line_no, "relevance");
      if (!std::isfinite(r.values(static_cast<Eigen::Index>(f)))) throw ParseError(line_no, "non-finite relevance");
    }
    out.push_back(std::move(r));
  }
  return out;
}

RelevanceStore make_relevance_store(std::span<const RelevanceRecord> records) {
  RelevanceStore store;
  for (const auto& r : records) store[{r.method, r.sample_id}] = {r.target_class, r.values};
  return store;
}

void write_component_csv(std::ostream& out, std::span<const ComponentRelevance> rows) {
  std::string buf = "scheme,component_id,score\n";
  for (const auto& rel : rows)
    for (Eigen::Index c = 0; c < rel.scores.size(); ++c) {
      buf += to_string(rel.scheme) + ',' + std::to_string(c) + ',';
      append_double(buf, rel.scores(c));
      buf += '\n';
    }
  out << buf;
}

void write_curves_csv(std::ostream& out, const ExperimentResult& result) {
  std::string buf = "method,scheme,direction,relevance_mode,session_mode,step,accuracy,mean_score\n";
  for (const auto& [key, curve] : result.curves) {
    const std::string prefix = key.method + ',' + to_string(key.scheme) + ',' + to_string(key.direction) + ',' +
                               to_string(key.relevance_mode) + ',' + to_string(key.session_mode) + ',';
    for (std::size_t k = 0; k < curve.accuracy.size(); ++k) {
      buf += prefix + std::to_string(k) + ',';
      append_double(buf, curve.accuracy[k]);
      buf += ',';
      append_double(buf, curve.mean_score[k]);
      buf += '\n';
    }
  }
  out << buf;
}

void write_metrics_csv(std::ostream& out, const ExperimentResult& result) {
  std::string buf = "method,scheme,session_mode,relevance_mode,aopc,abpc\n";
  for (const auto& [key, m] : result.metrics) {
    buf += key.method + ',' + to_string(key.scheme) + ',' + to_string(key.session_mode) + ',' +
           to_string(key.relevance_mode) + ',';
    append_double(buf, m.aopc);
    buf += ',';
    append_double(buf, m.abpc);
    buf += '\n';
  }
  out << buf;
}

std::vector<MetricRow> read_metrics_csv(std::istream& in) {
  std::string raw;
  std::size_t line_no = 1;
  if (!std::getline(in, raw)) throw ParseError(0, "empty metrics file");
  expect_header(raw, "method,scheme,session_mode,relevance_mode,aopc,abpc", line_no);
  std::vector<MetricRow> rows;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 6) throw ParseError(line_no, "expected 6 columns");
    rows.push_back({std::string(f[0]), std::string(f[1]), std::string(f[2]), std::string(f[3]),
                    number_field(f[4], line_no, "aopc"), number_field(f[5], line_no, "abpc")});
  }
  return rows;
}

void write_summary_csv(std::ostream& out, std::span<const MetricRow> rows) {
  using Key = std::tuple<std::string, std::string, std::string, std::string>;
  std::map<Key, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& r : rows) {
    auto& g = groups[{r.method, r.scheme, r.session_mode, r.relevance_mode}];
    g.first.push_back(r.aopc);
    g.second.push_back(r.abpc);
  }
  auto stats = [](std::vector<double> v) {
    // Sorting fixes the summation order, so the result does not depend on
    // the order in which runs were supplied.
    std::sort(v.begin(), v.end(), [](double a, double b) {
      if (std::isnan(a) || std::isnan(b)) return !std::isnan(a) && std::isnan(b);
      return a < b;
    });
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0;
    for (double x : v) var += (x - mean) * (x - mean);
    const double sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
    return std::pair{mean, sd};
  };
  std::string buf = "method,scheme,session_mode,relevance_mode,runs,aopc_mean,aopc_std,abpc_mean,abpc_std\n";
  for (const auto& [key, g] : groups) {
    const auto [am, as] = stats(g.first);
    const auto [bm, bs] = stats(g.second);
    buf += std::get<0>(key) + ',' + std::get<1>(key) + ',' + std::get<2>(key) + ',' + std::get<3>(key) + ',' +
           std::to_string(g.first.size());
    for (double v : {am, as, bm, bs}) {
      buf += ',';
      append_double(buf, v);
    }
    buf += '\n';
  }
  out << buf;
}

}  // namespace eegxai
