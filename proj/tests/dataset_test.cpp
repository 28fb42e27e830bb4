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

#include "eegxai/dataset.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "eegxai/errors.hpp"
#include "eegxai/format.hpp"
#include "test_util.hpp"

namespace eegxai {
namespace {

std::string header_310() {
  std::string h = "subject,session,trial,label";
  for (int f = 0; f < 310; ++f) h += "," + feature_column(f);
  return h;
}

std::string row_310(int n_features, double base = 0.5) {
  std::string r = "1,1,3,2";
  for (int f = 0; f < n_features; ++f) r += "," + format_double(base + f * 0.001);
  return r;
}

Dataset parse(const std::string& text) {
  std::istringstream in(text);
  return read_dataset(in);
}

std::size_t parse_error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

const std::string kSmallLayout = "#layout=channel-major;channels=2;bands=delta,theta;classes=3\n";
const std::string kSmallHeader = "subject,session,trial,label,f000,f001,f002,f003\n";

std::string small_file() {
  return kSmallLayout + kSmallHeader +
         "1,1,1,0,0.5,-1.25,3,1e-3\n"
         "1,2,4,1,0,0,0,0\n"
         "2,3,15,2,-7.5,2.5,1.125,100\n";
}

TEST(DatasetIoTest, MinimalFile) {
  const Dataset d = parse(header_310() + "\n" + row_310(310) + "\n");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.n_features(), 310);
  EXPECT_EQ(d.labels[0], 2);
  EXPECT_EQ(d.trials[0], 3);
  EXPECT_EQ(d.features(0, 309), 0.5 + 309 * 0.001);
  EXPECT_EQ(d.layout, Layout{});
}

TEST(DatasetIoTest, ShortRowNamesLine) {
  EXPECT_EQ(parse_error_line(header_310() + "\n" + row_310(310) + "\n" + row_310(309) + "\n"), 3u);
}

TEST(DatasetIoTest, RoundTripExact) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  Dataset d = make_empty_dataset({}, 3);
  d.features.resize(25, 310);
  for (Eigen::Index i = 0; i < d.features.size(); ++i) d.features.data()[i] = u(rng) * std::pow(10.0, (i % 13) - 6);
  for (int i = 0; i < 25; ++i) {
    d.labels.push_back(i % 3);
    d.subjects.push_back(4);
    d.sessions.push_back(1 + i % 3);
    d.trials.push_back(1 + i % 15);
    d.sample_ids.push_back(static_cast<std::size_t>(i));
  }
  std::ostringstream out;
  write_dataset(d, out);
  const Dataset back = parse(out.str());
  EXPECT_EQ(back.features, d.features);
  EXPECT_EQ(back.labels, d.labels);
  EXPECT_EQ(back.sessions, d.sessions);
  EXPECT_EQ(back.trials, d.trials);
  EXPECT_EQ(back.subjects, d.subjects);
  std::ostringstream again;
  write_dataset(back, again);
  EXPECT_EQ(again.str(), out.str());
}

TEST(DatasetIoTest, DecimalTextRoundTrip) {
  const Dataset d = parse(small_file());
  std::ostringstream out;
  write_dataset(d, out);
  const Dataset back = parse(out.str());
  EXPECT_EQ(back.features, d.features);
  EXPECT_EQ(d.features(0, 3), 1e-3);
  EXPECT_EQ(d.features(2, 2), 1.125);
  EXPECT_EQ(d.n_classes, 3);
  EXPECT_EQ(d.session_ids(), (std::vector<int>{1, 2, 3}));
}

TEST(DatasetIoTest, BandMajorRemapped) {
  const std::string text =
      "#layout=band-major;channels=2;bands=delta,theta;classes=3\n" + kSmallHeader + "1,1,1,0,10,11,20,21\n";
  const Dataset d = parse(text);
  // Band-major columns: (delta, ch0), (delta, ch1), (theta, ch0), (theta, ch1).
  EXPECT_EQ(d.features(0, d.layout.feature(0, 0)), 10);
  EXPECT_EQ(d.features(0, d.layout.feature(1, 0)), 11);
  EXPECT_EQ(d.features(0, d.layout.feature(0, 1)), 20);
  EXPECT_EQ(d.features(0, d.layout.feature(1, 1)), 21);
  EXPECT_EQ(d.features.row(0), (Eigen::RowVector4d(10, 20, 11, 21)));
}

TEST(DatasetIoTest, RejectsBadHeaders) {
  EXPECT_EQ(parse_error_line(""), 0u);
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_EQ(parse_error_line("#layout=row-major\n" + kSmallHeader), 1u);
  EXPECT_EQ(parse_error_line("#layout=channel-major;bands=theta\n" + kSmallHeader), 1u);
  EXPECT_EQ(parse_error_line(kSmallLayout + "subject,session,trial,label,f000,f001,f003,f002\n"), 2u);
  EXPECT_EQ(parse_error_line(kSmallLayout + "subject,trial,session,label,f000,f001,f002,f003\n"), 2u);
  EXPECT_EQ(parse_error_line(kSmallLayout + kSmallHeader + "1,1,1,0,1,2,3,4\n\n1,1,1,0,1,2,3,4\n"), 4u);
  EXPECT_NO_THROW(parse(kSmallLayout + kSmallHeader + "1,1,1,0,1,2,3,4\r\n\n\n"));
}

// Every schema-breaking mutation of one field is rejected at its line.
TEST(DatasetIoTest, FuzzMutationsRejected) {
  const std::string base = small_file();
  const std::vector<std::string> meta_bad = {"", "x", "1.5", "1e2", " 1", "99999999999", "-"};
  const std::vector<std::string> value_bad = {"", "abc", "nan", "inf", "-inf", "1,2", "0x1p3", "1..2", "1e999"};
  std::mt19937_64 rng(2);
  std::istringstream lines_in(base);
  std::vector<std::string> lines;
  for (std::string l; std::getline(lines_in, l);) lines.push_back(l);
  int checked = 0;
  for (int t = 0; t < 400; ++t) {
    auto mutated = lines;
    const std::size_t li = 2 + rng() % 3;
    auto fields = split(mutated[li], ',');
    std::vector<std::string> owned(fields.begin(), fields.end());
    const std::size_t col = rng() % owned.size();
    const int kind = static_cast<int>(rng() % 5);
    if (kind == 0) {
      owned.erase(owned.begin() + static_cast<std::ptrdiff_t>(col));
    } else if (kind == 1) {
      owned.insert(owned.begin() + static_cast<std::ptrdiff_t>(col), "0");
    } else if (kind == 2 && col >= 4) {
      owned[col] = value_bad[rng() % value_bad.size()];
    } else if (kind == 2) {
      owned[col] = meta_bad[rng() % meta_bad.size()];
    } else if (kind == 3) {
      owned[3] = std::to_string(3 + rng() % 5);  // label outside [0, 3)
    } else {
      owned[1] = rng() % 2 ? "0" : "-1";  // session ids start at 1
    }
    std::string line;
    for (std::size_t i = 0; i < owned.size(); ++i) line += (i ? "," : "") + owned[i];
    mutated[li] = line;
    std::string text;
    for (const auto& l : mutated) text += l + "\n";
    EXPECT_EQ(parse_error_line(text), li + 1) << text;
    ++checked;
  }
  EXPECT_EQ(checked, 400);
}

TEST(DatasetTest, SubsetAndSessions) {
  const Dataset d = parse(small_file());
  const Dataset s = d.session(2);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.sample_ids[0], 1u);
  EXPECT_EQ(d.trials_in(3, 10, 15).size(), 1u);
  EXPECT_EQ(d.trials_in(1, 2, 15).size(), 0u);
  std::vector<std::size_t> bad = {5};
  EXPECT_THROW(d.subset(bad), std::out_of_range);
}

TEST(DatasetTest, ValidateCatchesBrokenInvariants) {
  Dataset d = parse(small_file());
  d.labels[0] = 3;
  EXPECT_THROW(d.validate(), DomainError);
  d = parse(small_file());
  d.features(1, 1) = std::nan("");
  EXPECT_THROW(d.validate(), DomainError);
  d = parse(small_file());
  d.trials.pop_back();
  EXPECT_THROW(d.validate(), ShapeError);
}

// Class-0 logit is w . x with w = (1, 0, 0, 0); class 1 logit is 0; class 2
// logit is -100.
Network<double> sign_net() {
  return Network<double>({testing::dense({{1, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}, {0, 0, -100},
                                         Activation::kIdentity)});
}

TEST(FilterCorrectTest, Examples) {
  Dataset d = parse(small_file());
  // Predictions: row0 x0=0.5 -> 0; row1 zeros -> tie -> 0; row2 x0=-7.5 -> 1.
  auto pred = predict_labels(sign_net(), d.features);
  EXPECT_EQ(pred, (std::vector<int>{0, 0, 1}));
  d.labels = pred;
  EXPECT_EQ(filter_correct(sign_net(), d).size(), 3u);
  d.labels = {0, 1, 2};
  const Dataset only0 = filter_correct(Network<double>({testing::dense(
                                           {{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}, {1, 0, 0},
                                           Activation::kIdentity)}),
                                       d);
  EXPECT_EQ(only0.labels, (std::vector<int>{0}));
  EXPECT_EQ(only0.sample_ids, (std::vector<std::size_t>{0}));
}

TEST(FilterCorrectTest, CountMatchesAccuracy) {
  std::mt19937_64 rng(3);
  testing::RandomNetOptions o;
  o.min_inputs = o.max_inputs = 4;
  Dataset d = make_empty_dataset({2, 2}, 3);
  d.features.resize(200, 4);
  for (int i = 0; i < 200; ++i) {
    d.features.row(i) = testing::random_input(rng, 4).transpose();
    d.labels.push_back(static_cast<int>(rng() % 3));
    d.subjects.push_back(1);
    d.sessions.push_back(1);
    d.trials.push_back(1);
    d.sample_ids.push_back(static_cast<std::size_t>(i));
  }
  for (int t = 0; t < 10; ++t) {
    const auto net = testing::random_net(rng, o);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (predict(net, testing::VecD(d.features.row(static_cast<Eigen::Index>(i)).transpose())).label == d.labels[i])
        ++correct;
    const Dataset f = filter_correct(net, d);
    EXPECT_EQ(f.size(), correct);
    for (std::size_t i = 1; i < f.size(); ++i) EXPECT_LT(f.sample_ids[i - 1], f.sample_ids[i]);
  }
}

TEST(FilterCorrectTest, WidthMismatch) {
  EXPECT_THROW(filter_correct(testing::linear_net(), parse(small_file())), ShapeError);
}

}  // namespace
}  // namespace eegxai
