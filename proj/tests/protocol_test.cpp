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

// Five-seed checks of the protocol on synthetic data with planted relevance.

#include <gtest/gtest.h>

#include "planted_experiment.hpp"

namespace eegxai {
namespace {

constexpr int kSeeds = 5;

testing::PlantedOptions light() {
  testing::PlantedOptions o;
  o.samples_per_class = 150;
  o.max_eval_samples = 40;
  o.max_train_samples = 100;
  return o;
}

class PlantedProtocolTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    runs_ = new std::vector<testing::PlantedRun>();
    for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
      auto run = testing::make_planted_run(seed, light());
      testing::run_planted_protocol(run, light());
      runs_->push_back(std::move(run));
    }
  }
  static void TearDownTestSuite() {
    delete runs_;
    runs_ = nullptr;
  }

  template <typename F>
  static double seed_mean(F f) {
    double s = 0;
    for (const auto& r : *runs_) s += f(r);
    return s / kSeeds;
  }

  static std::vector<testing::PlantedRun>* runs_;
};

std::vector<testing::PlantedRun>* PlantedProtocolTest::runs_ = nullptr;

const PerturbationCurve& curve(const testing::PlantedRun& r, const std::string& method, SchemeKind scheme,
                               CurveKind kind, RelevanceMode mode, SessionMode session) {
  return r.result.curve({method, scheme, kind, mode, session});
}

double aopc_of(const testing::PlantedRun& r, const std::string& method, RelevanceMode mode, SessionMode session) {
  return r.result.metric({method, SchemeKind::kFeature, session, mode}).aopc;
}

TEST_F(PlantedProtocolTest, ClassifierTransfersWorse) {
  EXPECT_GE(seed_mean([](const auto& r) { return r.held_out_accuracy; }), 0.9);
  EXPECT_LT(seed_mean([](const auto& r) { return r.transfer_accuracy; }),
            seed_mean([](const auto& r) { return r.held_out_accuracy; }));
}

TEST_F(PlantedProtocolTest, CurvesStartAtFullAccuracy) {
  for (const auto& r : *runs_)
    for (const auto& [key, c] : r.result.curves) EXPECT_EQ(c.accuracy.front(), 1.0);
}

TEST_F(PlantedProtocolTest, MorfRemovesPlantedSignal) {
  for (SessionMode s : {SessionMode::kIntra, SessionMode::kInter}) {
    const double ig = seed_mean([&](const auto& r) {
      return curve(r, "integrated_gradients", SchemeKind::kFeature, CurveKind::kMorf, RelevanceMode::kReal, s)
          .accuracy[20];
    });
    const double random = seed_mean([&](const auto& r) {
      return curve(r, kRandomMethod, SchemeKind::kFeature, CurveKind::kMorf, RelevanceMode::kRandom, s).accuracy[20];
    });
    EXPECT_LE(ig, 0.5) << to_string(s);
    EXPECT_GE(random, 0.8) << to_string(s);
  }
}

TEST_F(PlantedProtocolTest, TopChannelAloneBeatsRandomChannel) {
  for (SessionMode s : {SessionMode::kIntra, SessionMode::kInter}) {
    const double ig = seed_mean([&](const auto& r) {
      return curve(r, "integrated_gradients", SchemeKind::kChannel, CurveKind::kSingleComponent,
                   RelevanceMode::kReal, s)
          .accuracy[1];
    });
    const double random = seed_mean([&](const auto& r) {
      return curve(r, kRandomMethod, SchemeKind::kChannel, CurveKind::kSingleComponent, RelevanceMode::kRandom, s)
          .accuracy[1];
    });
    EXPECT_GT(ig, random) << to_string(s);
  }
}

TEST_F(PlantedProtocolTest, RealAbovePresumedAboveRandom) {
  for (SessionMode s : {SessionMode::kIntra, SessionMode::kInter}) {
    const double real = seed_mean([&](const auto& r) { return aopc_of(r, "integrated_gradients", RelevanceMode::kReal, s); });
    const double presumed =
        seed_mean([&](const auto& r) { return aopc_of(r, "integrated_gradients", RelevanceMode::kPresumed, s); });
    const double random = seed_mean([&](const auto& r) { return aopc_of(r, kRandomMethod, RelevanceMode::kRandom, s); });
    EXPECT_GT(real, presumed) << to_string(s);
    EXPECT_GT(presumed, random) << to_string(s);
  }
}

TEST_F(PlantedProtocolTest, EndpointsAgree) {
  for (const auto& r : *runs_)
    for (SessionMode s : {SessionMode::kIntra, SessionMode::kInter}) {
      const double end =
          curve(r, kRandomMethod, SchemeKind::kFeature, CurveKind::kMorf, RelevanceMode::kRandom, s).mean_score.back();
      for (const auto& [key, c] : r.result.curves)
        if (key.scheme == SchemeKind::kFeature && key.session_mode == s && key.direction != CurveKind::kSingleComponent)
          EXPECT_EQ(c.mean_score.back(), end);
    }
}

}  // namespace
}  // namespace eegxai
