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

#include "eegxai/perturbation.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

#include "eegxai/errors.hpp"

namespace eegxai {
namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(const std::string& s, const std::array<Enum, N>& values, const char* what) {
  for (Enum v : values)
    if (to_string(v) == s) return v;
  throw std::invalid_argument(std::string("unknown ") + what + " '" + s + "'");
}

void check_rankings(std::span<const ComponentRanking> rankings, std::size_t n_samples,
                    const ComponentScheme& scheme) {
  if (rankings.size() != 1 && rankings.size() != n_samples)
    throw ShapeError("expected one shared ranking or one per sample, got " + std::to_string(rankings.size()) +
                     " for " + std::to_string(n_samples) + " samples");
  const auto k = static_cast<std::size_t>(scheme.n_components());
  for (const auto& r : rankings) {
    if (r.order.size() != k)
      throw ShapeError("ranking has " + std::to_string(r.order.size()) + " components, scheme " +
                       to_string(scheme.kind()) + " has " + std::to_string(k));
    std::vector<char> seen(k, 0);
    for (int c : r.order) {
      if (c < 0 || static_cast<std::size_t>(c) >= k || seen[static_cast<std::size_t>(c)])
        throw ShapeError("ranking is not a permutation of the scheme's components");
      seen[static_cast<std::size_t>(c)] = 1;
    }
  }
}

void check_samples(const Network<double>& net, const RowMatrix& samples, std::span<const int> labels,
                   const ComponentScheme& scheme) {
  if (samples.rows() == 0) throw ProtocolError("perturbation curve needs at least one sample");
  if (static_cast<std::size_t>(samples.rows()) != labels.size())
    throw ShapeError("sample and label counts differ");
  if (samples.cols() != net.n_inputs() || samples.cols() != scheme.n_features())
    throw ShapeError("sample width, network inputs and scheme size disagree");
}

// Accuracy and mean score of a batch against the original labels, reduced in
// sample order.
std::pair<double, double> score_batch(const Network<double>& net, const Mat<double>& inputs,
                                      std::span<const int> labels, ScoreKind kind) {
  const Mat<double> z = logits_batch(net, inputs);
  const Mat<double> p = kind == ScoreKind::kProbability ? softmax_columns(z) : z;
  double correct = 0, score = 0;
  for (Eigen::Index i = 0; i < z.cols(); ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    if (argmax(z.col(i)) == y) correct += 1;
    score += p(y, i);
  }
  const auto n = static_cast<double>(z.cols());
  return {correct / n, score / n};
}

const ComponentRanking& ranking_for(std::span<const ComponentRanking> rankings, Eigen::Index i) {
  return rankings.size() == 1 ? rankings.front() : rankings[static_cast<std::size_t>(i)];
}

void require_original_predictions(const Network<double>& net, const Mat<double>& inputs,
                                  std::span<const int> labels) {
  const Mat<double> z = logits_batch(net, inputs);
  for (Eigen::Index i = 0; i < z.cols(); ++i)
    if (argmax(z.col(i)) != labels[static_cast<std::size_t>(i)])
      throw ProtocolError("sample " + std::to_string(i) +
                          " is not classified as its label; curves run on correctly classified samples only");
}

std::vector<std::size_t> sample_rows(std::size_t n, std::size_t cap, std::mt19937_64& rng) {
  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  if (cap == 0 || cap >= n) return rows;
  std::shuffle(rows.begin(), rows.end(), rng);
  rows.resize(cap);
  std::sort(rows.begin(), rows.end());
  return rows;
}

std::uint64_t stream_seed(std::uint64_t seed, std::initializer_list<std::uint32_t> tags) {
  std::vector<std::uint32_t> words = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  words.insert(words.end(), tags);
  std::seed_seq seq(words.begin(), words.end());
  std::uint32_t parts[2];
  seq.generate(parts, parts + 2);
  return (static_cast<std::uint64_t>(parts[0]) << 32) | parts[1];
}

}  // namespace

std::string to_string(CurveKind k) {
  switch (k) {
    case CurveKind::kMorf: return "morf";
    case CurveKind::kLerf: return "lerf";
    case CurveKind::kSingleComponent: return "single";
  }
  return "?";
}
std::string to_string(RelevanceMode m) {
  switch (m) {
    case RelevanceMode::kReal: return "real";
    case RelevanceMode::kPresumed: return "presumed";
    case RelevanceMode::kRandom: return "random";
  }
  return "?";
}
std::string to_string(SessionMode m) { return m == SessionMode::kIntra ? "intra" : "inter"; }
std::string to_string(ScoreKind s) { return s == ScoreKind::kProbability ? "probability" : "logit"; }

CurveKind parse_curve_kind(const std::string& s) {
  return parse_enum(s, std::array{CurveKind::kMorf, CurveKind::kLerf, CurveKind::kSingleComponent}, "curve kind");
}
RelevanceMode parse_relevance_mode(const std::string& s) {
  return parse_enum(s, std::array{RelevanceMode::kReal, RelevanceMode::kPresumed, RelevanceMode::kRandom},
                    "relevance mode");
}
SessionMode parse_session_mode(const std::string& s) {
  return parse_enum(s, std::array{SessionMode::kIntra, SessionMode::kInter}, "session mode");
}
ScoreKind parse_score_kind(const std::string& s) {
  return parse_enum(s, std::array{ScoreKind::kProbability, ScoreKind::kLogit}, "score kind");
}

Eigen::VectorXd remove_components(const Eigen::Ref<const Eigen::VectorXd>& x, const ComponentRanking& ranking,
                                  const ComponentScheme& scheme, int k) {
  if (x.size() != scheme.n_features()) throw ShapeError("input width does not match scheme");
  if (k < 0 || k > static_cast<int>(ranking.order.size())) throw std::out_of_range("step out of range");
  Eigen::VectorXd out = x;
  for (int j = 0; j < k; ++j)
    for (int f : scheme.members(ranking.order[static_cast<std::size_t>(j)])) out(f) = 0.0;
  return out;
}

PerturbationCurve perturbation_curve(const Network<double>& net, const RowMatrix& samples,
                                     std::span<const int> labels, std::span<const ComponentRanking> rankings,
                                     const ComponentScheme& scheme, CurveKind direction, ScoreKind score) {
  check_samples(net, samples, labels, scheme);
  check_rankings(rankings, labels.size(), scheme);
  PerturbationCurve curve;
  curve.scheme = scheme.kind();
  curve.direction = direction;
  curve.n_samples = labels.size();
  Mat<double> inputs = samples.transpose();
  require_original_predictions(net, inputs, labels);
  const int K = scheme.n_components();
  for (int k = 0; k <= K; ++k) {
    if (k > 0) {
      for (Eigen::Index i = 0; i < inputs.cols(); ++i) {
        const int c = ranking_for(rankings, i).order[static_cast<std::size_t>(k - 1)];
        for (int f : scheme.members(c)) inputs(f, i) = 0.0;
      }
    }
    auto [acc, mean] = score_batch(net, inputs, labels, score);
    curve.accuracy.push_back(acc);
    curve.mean_score.push_back(mean);
  }
  return curve;
}

PerturbationCurve single_component_curve(const Network<double>& net, const RowMatrix& samples,
                                         std::span<const int> labels,
                                         std::span<const ComponentRanking> rankings,
                                         const ComponentScheme& scheme, ScoreKind score) {
  check_samples(net, samples, labels, scheme);
  check_rankings(rankings, labels.size(), scheme);
  PerturbationCurve curve;
  curve.scheme = scheme.kind();
  curve.direction = CurveKind::kSingleComponent;
  curve.n_samples = labels.size();
  const Mat<double> original = samples.transpose();
  require_original_predictions(net, original, labels);
  {
    auto [acc, mean] = score_batch(net, original, labels, score);
    curve.accuracy.push_back(acc);
    curve.mean_score.push_back(mean);
  }
  Mat<double> inputs = Mat<double>::Zero(original.rows(), original.cols());
  const int K = scheme.n_components();
  for (int k = 1; k <= K; ++k) {
    for (Eigen::Index i = 0; i < inputs.cols(); ++i) {
      const auto& order = ranking_for(rankings, i).order;
      if (k > 1)
        for (int f : scheme.members(order[static_cast<std::size_t>(k - 2)])) inputs(f, i) = 0.0;
      for (int f : scheme.members(order[static_cast<std::size_t>(k - 1)])) inputs(f, i) = original(f, i);
    }
    auto [acc, mean] = score_batch(net, inputs, labels, score);
    curve.accuracy.push_back(acc);
    curve.mean_score.push_back(mean);
  }
  return curve;
}

double aopc(const PerturbationCurve& curve) {
  if (curve.mean_score.empty()) throw std::invalid_argument("aopc: empty curve");
  double sum = 0;
  for (double s : curve.mean_score) sum += curve.mean_score.front() - s;
  return sum / static_cast<double>(curve.mean_score.size());
}

double abpc(const PerturbationCurve& morf, const PerturbationCurve& lerf) {
  if (morf.mean_score.size() != lerf.mean_score.size() || morf.scheme != lerf.scheme ||
      morf.n_samples != lerf.n_samples || morf.mean_score.empty())
    throw std::invalid_argument("abpc: curves differ in length, scheme or sample set");
  double sum = 0;
  for (std::size_t k = 0; k < morf.mean_score.size(); ++k) sum += lerf.mean_score[k] - morf.mean_score[k];
  return sum / static_cast<double>(morf.mean_score.size());
}

const PerturbationCurve& ExperimentResult::curve(const CurveKey& key) const {
  auto it = curves.find(key);
  if (it == curves.end())
    throw std::out_of_range("no curve for " + key.method + "/" + to_string(key.scheme) + "/" +
                            to_string(key.direction) + "/" + to_string(key.relevance_mode) + "/" +
                            to_string(key.session_mode));
  return it->second;
}

const Metrics& ExperimentResult::metric(const MetricKey& key) const {
  auto it = metrics.find(key);
  if (it == metrics.end())
    throw std::out_of_range("no metrics for " + key.method + "/" + to_string(key.scheme) + "/" +
                            to_string(key.session_mode) + "/" + to_string(key.relevance_mode));
  return it->second;
}

void ExperimentResult::merge(const ExperimentResult& other) {
  for (const auto& [k, v] : other.curves)
    if (!curves.emplace(k, v).second) throw std::invalid_argument("merge: duplicate curve key");
  for (const auto& [k, v] : other.metrics)
    if (!metrics.emplace(k, v).second) throw std::invalid_argument("merge: duplicate metric key");
  for (const auto& [k, v] : other.n_samples) n_samples[k] = v;
}

std::vector<Eigen::VectorXd> compute_relevance(const Network<double>& net, const Dataset& data, Method method,
                                               const AttributionParams& params, const RelevanceStore* precomputed) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int label = data.labels[i];
    if (precomputed) {
      auto it = precomputed->find({method, data.sample_ids[i]});
      if (it != precomputed->end() && it->second.target_class == label &&
          it->second.values.size() == data.n_features()) {
        out.push_back(it->second.values);
        continue;
      }
    }
    const Eigen::VectorXd x = data.features.row(static_cast<Eigen::Index>(i)).transpose();
    out.push_back(explain(method, net, x, label, params).values);
  }
  return out;
}

ExperimentResult run_protocol(const Network<double>& net, const Dataset& train_data, const Dataset& eval_data,
                              std::span<const Method> methods, std::span<const SchemeKind> schemes,
                              const ProtocolConfig& config) {
  if (eval_data.n_features() != net.n_inputs() || train_data.n_features() != net.n_inputs())
    throw ShapeError("dataset width does not match the network input width");
  if (!(train_data.layout == eval_data.layout)) throw ShapeError("training and evaluation layouts differ");

  const std::vector<int> train_sessions = train_data.session_ids();
  const std::vector<int> eval_sessions = eval_data.session_ids();
  SessionMode session;
  {
    std::vector<int> common;
    std::set_intersection(train_sessions.begin(), train_sessions.end(), eval_sessions.begin(),
                          eval_sessions.end(), std::back_inserter(common));
    if (common.empty()) session = SessionMode::kInter;
    else if (common == eval_sessions) session = SessionMode::kIntra;
    else throw ProtocolError("evaluation data mixes training and non-training sessions");
  }
  const auto session_tag = static_cast<std::uint32_t>(session);

  Dataset eval = filter_correct(net, eval_data);
  if (eval.empty())
    throw ProtocolError("no correctly classified samples in the " + to_string(session) +
                        "-session evaluation set after filter_correct");
  {
    std::mt19937_64 rng(stream_seed(config.seed, {1, session_tag}));
    eval = eval.subset(sample_rows(eval.size(), config.max_eval_samples, rng));
  }

  const bool need_presumed =
      !methods.empty() && std::find(config.relevance_modes.begin(), config.relevance_modes.end(),
                                    RelevanceMode::kPresumed) != config.relevance_modes.end();
  const bool need_real = std::find(config.relevance_modes.begin(), config.relevance_modes.end(),
                                   RelevanceMode::kReal) != config.relevance_modes.end();
  Dataset train;
  if (need_presumed) {
    train = filter_correct(net, train_data);
    if (train.empty()) throw ProtocolError("no correctly classified training samples for presumed relevance");
    std::mt19937_64 rng(stream_seed(config.seed, {2}));
    train = train.subset(sample_rows(train.size(), config.max_train_samples, rng));
  }

  ExperimentResult result;
  result.seed = config.seed;
  result.n_samples[session] = eval.size();

  const std::span<const int> labels(eval.labels);
  auto emit = [&](const std::string& method, SchemeKind kind, RelevanceMode mode,
                  std::span<const ComponentRanking> descending, std::span<const ComponentRanking> ascending) {
    const ComponentScheme scheme(kind, eval.layout);
    const PerturbationCurve* morf = nullptr;
    const PerturbationCurve* lerf = nullptr;
    for (CurveKind ck : config.curve_kinds) {
      PerturbationCurve c =
          ck == CurveKind::kSingleComponent
              ? single_component_curve(net, eval.features, labels, descending, scheme, config.score)
              : perturbation_curve(net, eval.features, labels, ck == CurveKind::kMorf ? descending : ascending,
                                   scheme, ck, config.score);
      c.method = method;
      c.relevance_mode = mode;
      c.session_mode = session;
      auto [it, inserted] = result.curves.emplace(CurveKey{method, kind, ck, mode, session}, std::move(c));
      if (ck == CurveKind::kMorf) morf = &it->second;
      if (ck == CurveKind::kLerf) lerf = &it->second;
    }
    if (morf) {
      Metrics m{aopc(*morf), lerf ? abpc(*morf, *lerf) : std::numeric_limits<double>::quiet_NaN()};
      result.metrics[MetricKey{method, kind, session, mode}] = m;
    }
  };

  for (Method method : methods) {
    const std::string name = to_string(method);
    std::vector<Eigen::VectorXd> eval_maps, train_maps;
    if (need_real) eval_maps = compute_relevance(net, eval, method, config.attribution, config.precomputed);
    if (need_presumed) train_maps = compute_relevance(net, train, method, config.attribution, config.precomputed);

    for (SchemeKind kind : schemes) {
      const ComponentScheme scheme(kind, eval.layout);
      if (need_real) {
        std::vector<ComponentRanking> desc, asc;
        for (const auto& m : eval_maps) {
          const ComponentRelevance rel = aggregate(m, scheme);
          desc.push_back(rank_components(rel, RankDirection::kDescending, config.abs_relevance));
          asc.push_back(rank_components(rel, RankDirection::kAscending, config.abs_relevance));
        }
        emit(name, kind, RelevanceMode::kReal, desc, asc);
      }
      if (need_presumed) {
        std::vector<ComponentRelevance> per_sample;
        for (const auto& m : train_maps) per_sample.push_back(aggregate(m, scheme));
        std::vector<ComponentRanking> desc, asc;
        if (!config.presumed_per_class) {
          const ComponentRelevance mean = mean_relevance(per_sample);
          desc.push_back(rank_components(mean, RankDirection::kDescending, config.abs_relevance));
          asc.push_back(rank_components(mean, RankDirection::kAscending, config.abs_relevance));
        } else {
          std::vector<ComponentRanking> class_desc, class_asc;
          for (int c = 0; c < eval.n_classes; ++c) {
            std::vector<ComponentRelevance> members;
            for (std::size_t i = 0; i < train.size(); ++i)
              if (train.labels[i] == c) members.push_back(per_sample[i]);
            if (members.empty()) members = per_sample;
            const ComponentRelevance mean = mean_relevance(members);
            class_desc.push_back(rank_components(mean, RankDirection::kDescending, config.abs_relevance));
            class_asc.push_back(rank_components(mean, RankDirection::kAscending, config.abs_relevance));
          }
          for (int y : eval.labels) {
            desc.push_back(class_desc[static_cast<std::size_t>(y)]);
            asc.push_back(class_asc[static_cast<std::size_t>(y)]);
          }
        }
        emit(name, kind, RelevanceMode::kPresumed, desc, asc);
      }
    }
  }

  if (config.include_random) {
    for (SchemeKind kind : schemes) {
      const ComponentScheme scheme(kind, eval.layout);
      std::mt19937_64 rng(stream_seed(config.seed, {3, static_cast<std::uint32_t>(kind), session_tag}));
      std::uniform_real_distribution<double> u(0.0, 1.0);
      std::vector<ComponentRanking> desc, asc;
      for (std::size_t i = 0; i < eval.size(); ++i) {
        ComponentRelevance rel{kind, Eigen::VectorXd(scheme.n_components())};
        for (Eigen::Index c = 0; c < rel.scores.size(); ++c) rel.scores(c) = u(rng);
        desc.push_back(rank_components(rel, RankDirection::kDescending));
        asc.push_back(rank_components(rel, RankDirection::kAscending));
      }
      emit(kRandomMethod, kind, RelevanceMode::kRandom, desc, asc);
    }
  }
  return result;
}

}  // namespace eegxai
