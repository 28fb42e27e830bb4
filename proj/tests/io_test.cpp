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

#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include "eegxai/errors.hpp"
#include "eegxai/format.hpp"
#include "test_util.hpp"

namespace eegxai {
namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

TEST(FormatTest, ShortestRoundTrip) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10000; ++t) {
    double v;
    const std::uint64_t bits = rng();
    std::memcpy(&v, &bits, sizeof v);
    if (!std::isfinite(v)) continue;
    EXPECT_EQ(*parse_double(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-2.0), "-2");
  EXPECT_FALSE(parse_double("1.0x").has_value());
  EXPECT_FALSE(parse_double("").has_value());
  EXPECT_EQ(feature_column(7), "f007");
  EXPECT_EQ(feature_column(309), "f309");
}

TEST(NetworkJsonTest, ExactRoundTrip) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    auto net = testing::random_net(rng);
    auto layers = net.layers();
    layers[0].weights(0, 0) = std::numeric_limits<double>::denorm_min();
    layers[0].weights(0, 1) = -std::numeric_limits<double>::max();
    layers.back().biases(0) = 1.0 / 3.0;
    net = Network<double>(layers);
    const auto back = network_from_json(nlohmann::json::parse(network_to_json(net).dump()));
    ASSERT_EQ(back.depth(), net.depth());
    for (std::size_t l = 0; l < net.depth(); ++l) {
      EXPECT_EQ(back.layers()[l].weights, net.layers()[l].weights);
      EXPECT_EQ(back.layers()[l].biases, net.layers()[l].biases);
      EXPECT_EQ(back.layers()[l].activation, net.layers()[l].activation);
    }
  }
}

TEST(NetworkJsonTest, Schema) {
  const auto j = network_to_json(testing::two_two_one(1, -1));
  EXPECT_EQ(j.at("n_inputs"), 2);
  EXPECT_EQ(j.at("n_classes"), 1);
  EXPECT_EQ(j.at("layers").size(), 2u);
  EXPECT_EQ(j.at("layers")[0].at("weights"), nlohmann::json({1.0, -1.0, 2.0, 0.5}));
  EXPECT_EQ(j.at("layers")[0].at("activation"), "relu");
  EXPECT_EQ(j.at("layers")[1].at("activation"), "identity");
  EXPECT_EQ(j.at("layers")[1].at("rows"), 1);
  EXPECT_EQ(j.at("layers")[1].at("cols"), 2);
}

TEST(NetworkJsonTest, RejectsMalformed) {
  auto j = network_to_json(testing::two_two_one());
  auto k = j;
  k["layers"][0]["weights"].erase(0);
  EXPECT_THROW(network_from_json(k), ShapeError);
  k = j;
  k["n_inputs"] = 3;
  EXPECT_THROW(network_from_json(k), ShapeError);
  k = j;
  k["layers"][1]["activation"] = "tanh";
  EXPECT_ANY_THROW(network_from_json(k));
  k = j;
  k.erase("layers");
  EXPECT_THROW(network_from_json(k), ParseError);
  k = j;
  k["layers"][1]["activation"] = "relu";
  EXPECT_ANY_THROW(network_from_json(k));
}

TEST(NetworkJsonTest, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "eegxai_io_test_model.json";
  const auto net = testing::two_two_one(0.25, -3);
  save_network(net, path);
  EXPECT_EQ(load_network(path).layers()[1].weights, net.layers()[1].weights);
  std::filesystem::remove(path);
  EXPECT_THROW(load_network(path), std::runtime_error);
}

TEST(GroundTruthJsonTest, RoundTrip) {
  GroundTruth t;
  t.informative[1] = {3, 9};
  t.informative[2] = {3, 9};
  t.shifted[1] = {};
  t.shifted[2] = {9};
  t.class_means[1] = Mat<double>::Random(3, 12);
  t.class_means[2] = Mat<double>::Random(3, 12);
  const auto back = ground_truth_from_json(nlohmann::json::parse(ground_truth_to_json(t).dump()));
  EXPECT_EQ(back.informative, t.informative);
  EXPECT_EQ(back.shifted, t.shifted);
  EXPECT_EQ(back.class_means, t.class_means);
}

TEST(RelevanceCsvTest, RoundTrip) {
  std::mt19937_64 rng(3);
  std::vector<RelevanceRecord> records;
  for (std::size_t i = 0; i < 6; ++i)
    records.push_back({i % 2 ? Method::kLrpZ : Method::kDeepLift, 100 + i, static_cast<int>(i % 3),
                       testing::random_input(rng, 310, -1e-3, 1e3)});
  std::ostringstream out;
  write_relevance_csv(out, records, 310);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[0].substr(0, 36), "method,sample_id,target_class,f000,f");
  EXPECT_EQ(lines[1].substr(0, 14), "deeplift,100,0");
  std::istringstream in(out.str());
  const auto back = read_relevance_csv(in);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(back[i].method, records[i].method);
    EXPECT_EQ(back[i].sample_id, records[i].sample_id);
    EXPECT_EQ(back[i].target_class, records[i].target_class);
    EXPECT_EQ(back[i].values, records[i].values);
  }
  const auto store = make_relevance_store(back);
  EXPECT_EQ(store.size(), 6u);
  EXPECT_EQ(store.at({Method::kLrpZ, 101}).values, records[1].values);
}

TEST(RelevanceCsvTest, RejectsBadRows) {
  std::vector<RelevanceRecord> records = {{Method::kSaliency, 0, 1, Eigen::VectorXd::Ones(3)}};
  std::ostringstream out;
  write_relevance_csv(out, records, 3);
  const std::string good = out.str();
  auto expect_line = [](const std::string& text, std::size_t line) {
    std::istringstream in(text);
    try {
      read_relevance_csv(in);
      ADD_FAILURE() << "accepted " << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << text;
    }
  };
  const std::string header = lines_of(good)[0] + "\n";
  expect_line(header + "saliency,0,1,1,1\n", 2);
  expect_line(header + "shap,0,1,1,1,1\n", 2);
  expect_line(header + "saliency,0,-1,1,1,1\n", 2);
  expect_line(header + "saliency,0,1,1,nan,1\n", 2);
  expect_line(header + "saliency,x,1,1,1,1\n", 2);
  expect_line("method,sample,target_class,f000\n", 1);
  std::vector<RelevanceRecord> wrong = {{Method::kSaliency, 0, 1, Eigen::VectorXd::Ones(4)}};
  std::ostringstream sink;
  EXPECT_THROW(write_relevance_csv(sink, wrong, 3), ShapeError);
}

TEST(ComponentCsvTest, Layout) {
  std::vector<ComponentRelevance> rows = {{SchemeKind::kBand, Eigen::VectorXd::LinSpaced(5, 0, 1)}};
  std::ostringstream out;
  write_component_csv(out, rows);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[0], "scheme,component_id,score");
  EXPECT_EQ(lines[1], "band,0,0");
  EXPECT_EQ(lines[3], "band,2,0.5");
}

ExperimentResult tiny_result() {
  ExperimentResult r;
  PerturbationCurve morf;
  morf.method = "lrp_z";
  morf.scheme = SchemeKind::kBand;
  morf.accuracy = {1, 0.5, 0};
  morf.mean_score = {1.0, 0.2, 0.0};
  morf.n_samples = 2;
  PerturbationCurve lerf = morf;
  lerf.direction = CurveKind::kLerf;
  lerf.mean_score = {1.0, 0.9, 0.0};
  r.curves[{morf.method, morf.scheme, CurveKind::kMorf, RelevanceMode::kReal, SessionMode::kIntra}] = morf;
  r.curves[{lerf.method, lerf.scheme, CurveKind::kLerf, RelevanceMode::kReal, SessionMode::kIntra}] = lerf;
  r.metrics[{"lrp_z", SchemeKind::kBand, SessionMode::kIntra, RelevanceMode::kReal}] = {aopc(morf), abpc(morf, lerf)};
  return r;
}

TEST(CurveCsvTest, Rows) {
  std::ostringstream out;
  write_curves_csv(out, tiny_result());
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[0], "method,scheme,direction,relevance_mode,session_mode,step,accuracy,mean_score");
  EXPECT_EQ(lines[1], "lrp_z,band,morf,real,intra,0,1,1");
  EXPECT_EQ(lines[2], "lrp_z,band,morf,real,intra,1,0.5,0.2");
  EXPECT_EQ(lines[6], "lrp_z,band,lerf,real,intra,2,0,0");
}

TEST(MetricsCsvTest, RoundTrip) {
  std::ostringstream out;
  write_metrics_csv(out, tiny_result());
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], "method,scheme,session_mode,relevance_mode,aopc,abpc");
  std::istringstream in(out.str());
  const auto rows = read_metrics_csv(in);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].method, "lrp_z");
  EXPECT_EQ(rows[0].scheme, "band");
  EXPECT_EQ(rows[0].aopc, aopc(tiny_result().curves.begin()->second));
  EXPECT_NEAR(rows[0].abpc, 0.7 / 3, 1e-15);
}

TEST(SummaryCsvTest, StableUnderPermutation) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<MetricRow> rows;
  for (int run = 0; run < 7; ++run)
    for (const char* m : {"saliency", "integrated_gradients", "random"})
      for (const char* s : {"feature", "channel"}) rows.push_back({m, s, "intra", "real", u(rng), u(rng)});
  rows.push_back({"random", "band", "inter", "random", 0.25, std::numeric_limits<double>::quiet_NaN()});
  std::ostringstream first;
  write_summary_csv(first, rows);
  for (int t = 0; t < 20; ++t) {
    std::shuffle(rows.begin(), rows.end(), rng);
    std::ostringstream out;
    write_summary_csv(out, rows);
    EXPECT_EQ(out.str(), first.str());
  }
  const auto lines = lines_of(first.str());
  EXPECT_EQ(lines[0], "method,scheme,session_mode,relevance_mode,runs,aopc_mean,aopc_std,abpc_mean,abpc_std");
  EXPECT_EQ(lines.size(), 8u);
}

TEST(SummaryCsvTest, MeanAndSampleStd) {
  std::vector<MetricRow> rows = {{"lrp_z", "band", "intra", "real", 1, 2}, {"lrp_z", "band", "intra", "real", 3, 2}};
  std::ostringstream out;
  write_summary_csv(out, rows);
  EXPECT_EQ(lines_of(out.str())[1], "lrp_z,band,intra,real,2,2," + format_double(std::sqrt(2.0)) + ",2,0");
}

}  // namespace
}  // namespace eegxai
