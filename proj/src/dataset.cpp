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

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>

#include "eegxai/errors.hpp"
#include "eegxai/format.hpp"

namespace eegxai {
namespace {

constexpr std::array<std::string_view, 4> kMetaColumns = {"subject", "session", "trial", "label"};

enum class Order { kChannelMajor, kBandMajor };

struct Header {
  Layout layout;
  int n_classes = 3;
  Order order = Order::kChannelMajor;
};

// Parses "#layout=channel-major;channels=62;bands=delta,theta,...;classes=3".
Header parse_layout_line(std::string_view line, std::size_t line_no) {
  Header h;
  line.remove_prefix(1);
  for (std::string_view item : split(line, ';')) {
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "malformed layout item '" + std::string(item) + "'");
    std::string_view key = item.substr(0, eq);
    std::string_view value = item.substr(eq + 1);
    if (key == "layout") {
      if (value == "channel-major") h.order = Order::kChannelMajor;
      else if (value == "band-major") h.order = Order::kBandMajor;
      else throw ParseError(line_no, "unknown layout '" + std::string(value) + "'");
    } else if (key == "channels") {
      auto n = parse_int<int>(value);
      if (!n || *n <= 0) throw ParseError(line_no, "bad channel count");
      h.layout.n_channels = *n;
    } else if (key == "bands") {
      auto names = split(value, ',');
      if (names.empty() || names.size() > kBandNames.size())
        throw ParseError(line_no, "bad band list");
      for (std::size_t b = 0; b < names.size(); ++b)
        if (names[b] != kBandNames[b])
          throw ParseError(line_no, "band " + std::to_string(b) + " must be '" +
                                        std::string(kBandNames[b]) + "'");
      h.layout.n_bands = static_cast<int>(names.size());
    } else if (key == "classes") {
      auto n = parse_int<int>(value);
      if (!n || *n < 2) throw ParseError(line_no, "bad class count");
      h.n_classes = *n;
    } else {
      throw ParseError(line_no, "unknown layout key '" + std::string(key) + "'");
    }
  }
  return h;
}

std::string layout_line(const Dataset& data) {
  std::string s = "#layout=channel-major;channels=" + std::to_string(data.layout.n_channels) + ";bands=";
  for (int b = 0; b < data.layout.n_bands; ++b) {
    if (b) s += ',';
    s += kBandNames.at(static_cast<std::size_t>(b));
  }
  s += ";classes=" + std::to_string(data.n_classes);
  return s;
}

}  // namespace

void Dataset::validate() const {
  const std::size_t n = labels.size();
  if (features.rows() != static_cast<Eigen::Index>(n) || subjects.size() != n ||
      sessions.size() != n || trials.size() != n || sample_ids.size() != n)
    throw ShapeError("dataset columns have inconsistent lengths");
  if (features.cols() != layout.n_features())
    throw ShapeError("dataset has " + std::to_string(features.cols()) +
                     " feature columns, layout declares " + std::to_string(layout.n_features()));
  if (!all_finite(features)) throw DomainError("dataset contains non-finite feature values");
  for (int label : labels)
    if (label < 0 || label >= n_classes)
      throw DomainError("label " + std::to_string(label) + " outside [0, " +
                        std::to_string(n_classes) + ")");
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out = make_empty_dataset(layout, n_classes);
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t r = rows[i];
    if (r >= size()) throw std::out_of_range("subset row " + std::to_string(r) + " out of range");
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(static_cast<Eigen::Index>(r));
    out.labels.push_back(labels[r]);
    out.subjects.push_back(subjects[r]);
    out.sessions.push_back(sessions[r]);
    out.trials.push_back(trials[r]);
    out.sample_ids.push_back(sample_ids[r]);
  }
  return out;
}

Dataset Dataset::session(int session_id) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < size(); ++i)
    if (sessions[i] == session_id) rows.push_back(i);
  return subset(rows);
}

Dataset Dataset::trials_in(int session_id, int first_trial, int last_trial) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < size(); ++i)
    if (sessions[i] == session_id && trials[i] >= first_trial && trials[i] <= last_trial)
      rows.push_back(i);
  return subset(rows);
}

std::vector<int> Dataset::session_ids() const {
  std::set<int> ids(sessions.begin(), sessions.end());
  return {ids.begin(), ids.end()};
}

Dataset make_empty_dataset(Layout layout, int n_classes) {
  Dataset d;
  d.layout = layout;
  d.n_classes = n_classes;
  d.features.resize(0, layout.n_features());
  return d;
}

Dataset read_dataset(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  Header header;

  auto next_line = [&]() -> bool {
    if (!std::getline(in, raw)) return false;
    ++line_no;
    return true;
  };

  if (!next_line()) throw ParseError(0, "empty dataset file");
  std::string_view line = strip_cr(raw);
  if (!line.empty() && line.front() == '#') {
    header = parse_layout_line(line, line_no);
    if (!next_line()) throw ParseError(line_no, "missing column header");
    line = strip_cr(raw);
  }

  const Layout layout = header.layout;
  const int d = layout.n_features();
  const std::size_t n_columns = kMetaColumns.size() + static_cast<std::size_t>(d);
  {
    auto names = split(line, ',');
    if (names.size() != n_columns)
      throw ParseError(line_no, "header has " + std::to_string(names.size()) + " columns, expected " +
                                    std::to_string(n_columns));
    for (std::size_t c = 0; c < kMetaColumns.size(); ++c)
      if (names[c] != kMetaColumns[c])
        throw ParseError(line_no, "column " + std::to_string(c) + " must be '" +
                                      std::string(kMetaColumns[c]) + "'");
    for (int f = 0; f < d; ++f)
      if (names[kMetaColumns.size() + static_cast<std::size_t>(f)] != feature_column(f))
        throw ParseError(line_no, "column " + std::to_string(kMetaColumns.size() + f) +
                                      " must be '" + feature_column(f) + "'");
  }

  Dataset data = make_empty_dataset(layout, header.n_classes);
  std::vector<double> values;
  std::size_t blank_at = 0;
  while (next_line()) {
    line = strip_cr(raw);
    if (line.empty()) {
      if (!blank_at) blank_at = line_no;
      continue;
    }
    if (blank_at) throw ParseError(blank_at, "blank line inside data");
    auto fields = split(line, ',');
    if (fields.size() != n_columns)
      throw ParseError(line_no, "row has " + std::to_string(fields.size()) + " columns, expected " +
                                    std::to_string(n_columns));
    int meta[4];
    for (std::size_t c = 0; c < 4; ++c) {
      auto v = parse_int<int>(fields[c]);
      if (!v) throw ParseError(line_no, std::string(kMetaColumns[c]) + " is not an integer");
      meta[c] = *v;
    }
    if (meta[1] < 1) throw ParseError(line_no, "session ids start at 1");
    if (meta[3] < 0 || meta[3] >= header.n_classes)
      throw ParseError(line_no, "unknown label " + std::to_string(meta[3]));
    const std::size_t row_start = values.size();
    values.resize(row_start + static_cast<std::size_t>(d));
    for (int f = 0; f < d; ++f) {
      auto v = parse_double(fields[4 + static_cast<std::size_t>(f)]);
      if (!v) throw ParseError(line_no, "feature " + feature_column(f) + " is not a number");
      if (!std::isfinite(*v)) throw ParseError(line_no, "feature " + feature_column(f) + " is not finite");
      int target = f;
      if (header.order == Order::kBandMajor) {
        // band-major column f holds (band = f / channels, channel = f % channels)
        target = layout.feature(f % layout.n_channels, f / layout.n_channels);
      }
      values[row_start + static_cast<std::size_t>(target)] = *v;
    }
    data.subjects.push_back(meta[0]);
    data.sessions.push_back(meta[1]);
    data.trials.push_back(meta[2]);
    data.labels.push_back(meta[3]);
    data.sample_ids.push_back(data.sample_ids.size());
  }
  data.features = Eigen::Map<RowMatrix>(values.data(), static_cast<Eigen::Index>(data.labels.size()), d);
  return data;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset '" + path.string() + "'");
  try {
    return read_dataset(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + std::string(e.what()));
  }
}

void write_dataset(const Dataset& data, std::ostream& out) {
  data.validate();
  std::string buf = layout_line(data);
  buf += '\n';
  for (auto c : kMetaColumns) {
    buf += c;
    buf += ',';
  }
  for (int f = 0; f < data.layout.n_features(); ++f) {
    if (f) buf += ',';
    buf += feature_column(f);
  }
  buf += '\n';
  out << buf;
  for (std::size_t i = 0; i < data.size(); ++i) {
    buf.clear();
    buf += std::to_string(data.subjects[i]) + ',' + std::to_string(data.sessions[i]) + ',' +
           std::to_string(data.trials[i]) + ',' + std::to_string(data.labels[i]);
    for (Eigen::Index f = 0; f < data.features.cols(); ++f) {
      buf += ',';
      append_double(buf, data.features(static_cast<Eigen::Index>(i), f));
    }
    buf += '\n';
    out << buf;
  }
}

void save_dataset(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write dataset '" + path.string() + "'");
  write_dataset(data, out);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::vector<int> predict_labels(const Network<double>& net, const RowMatrix& features) {
  std::vector<int> out(static_cast<std::size_t>(features.rows()));
  if (features.rows() == 0) return out;
  const Mat<double> z = logits_batch(net, features.transpose());
  for (Eigen::Index i = 0; i < z.cols(); ++i)
    out[static_cast<std::size_t>(i)] = static_cast<int>(argmax(z.col(i)));
  return out;
}

Dataset filter_correct(const Network<double>& net, const Dataset& data) {
  if (data.n_features() != net.n_inputs())
    throw ShapeError("dataset has " + std::to_string(data.n_features()) +
                     " features, network expects " + std::to_string(net.n_inputs()));
  const auto predicted = predict_labels(net, data.features);
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (predicted[i] == data.labels[i]) rows.push_back(i);
  return data.subset(rows);
}

}  // namespace eegxai
