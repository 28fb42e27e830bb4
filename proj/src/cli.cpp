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

#include "eegxai/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "eegxai/attribution.hpp"
#include "eegxai/dataset.hpp"
#include "eegxai/errors.hpp"
#include "eegxai/io.hpp"
#include "eegxai/perturbation.hpp"
#include "eegxai/synthetic.hpp"
#include "eegxai/train.hpp"

namespace eegxai {
namespace {

namespace fs = std::filesystem;

struct SynthOptions {
  SynthConfig cfg;
  std::string out_dir;
};

struct TrainOptions {
  std::string data, out_dir;
  int train_session = 1;
  int test_trial_start = 10;
  TrainConfig cfg;
};

struct ExplainOptions {
  std::string data, model, out_dir;
  std::vector<std::string> methods = {"saliency", "guided_bp", "lrp_z", "integrated_gradients", "deeplift"};
  std::vector<int> sessions = {1};
  std::size_t limit = 200;
  int ig_steps = 50;
  double lrp_epsilon = 1e-6;
  std::uint64_t seed = 0;
};

struct EvaluateOptions {
  std::string data, model, out_dir, relevance;
  int train_session = 1;
  int test_trial_start = 10;
  std::vector<int> inter_sessions = {2};
  std::vector<std::string> methods = {"saliency", "guided_bp", "lrp_z", "integrated_gradients", "deeplift"};
  std::vector<std::string> schemes = {"feature", "band", "channel"};
  int ig_steps = 50;
  double lrp_epsilon = 1e-6;
  bool abs_relevance = false;
  bool presumed_per_class = false;
  std::string score = "probability";
  std::size_t max_samples = 200;
  std::size_t max_train_samples = 0;
  std::uint64_t seed = 0;
};

struct ReportOptions {
  std::vector<std::string> metrics;
  std::string out_dir;
  std::uint64_t seed = 0;
};

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

void require_file(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path)) throw std::runtime_error(std::string(what) + " '" + path + "' does not exist");
}

fs::path prepare_out_dir(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

// Resolved options of one subcommand as a TOML section that --config accepts.
void write_echo(const CLI::App& sub, const fs::path& path) {
  open_out(path) << '[' << sub.get_name() << "]\n" << sub.config_to_str(true, false);
}

// Training rows of the training session: trials before test_trial_start
// (every trial when test_trial_start is 0).
Dataset training_part(const Dataset& data, int session, int test_trial_start) {
  if (test_trial_start <= 0) return data.session(session);
  return data.trials_in(session, std::numeric_limits<int>::min(), test_trial_start - 1);
}

Dataset held_out_part(const Dataset& data, int session, int test_trial_start) {
  if (test_trial_start <= 0) return data.session(session);
  return data.trials_in(session, test_trial_start, std::numeric_limits<int>::max());
}

double accuracy(const Network<double>& net, const Dataset& d) {
  if (d.empty()) return 0;
  return static_cast<double>(filter_correct(net, d).size()) / static_cast<double>(d.size());
}

void cmd_synth(const SynthOptions& o, const CLI::App& app, std::ostream& out) {
  auto [data, truth] = generate_synthetic(o.cfg);
  const fs::path dir = prepare_out_dir(o.out_dir);
  save_dataset(data, dir / "dataset.csv");
  open_out(dir / "ground_truth.json") << ground_truth_to_json(truth).dump(1) << '\n';
  write_echo(app, dir / "synth.config.toml");
  out << "wrote " << data.size() << " samples to " << (dir / "dataset.csv").string() << '\n';
}

void cmd_train(const TrainOptions& o, const CLI::App& app, std::ostream& out) {
  require_file(o.data, "dataset");
  const Dataset data = load_dataset(o.data);
  const Dataset train_rows = training_part(data, o.train_session, o.test_trial_start);
  if (train_rows.empty())
    throw std::runtime_error("no training rows in session " + std::to_string(o.train_session));
  auto [net, report] = train(train_rows, o.cfg);
  const fs::path dir = prepare_out_dir(o.out_dir);
  save_network(net, dir / "model.json");
  open_out(dir / "train_report.json") << train_report_to_json(report).dump(1) << '\n';
  write_echo(app, dir / "train.config.toml");
  out << "epochs " << report.final_epoch << ", best epoch " << report.best_epoch << ", train accuracy "
      << accuracy(net, train_rows);
  if (o.test_trial_start > 0) out << ", held-out accuracy " << accuracy(net, held_out_part(data, o.train_session, o.test_trial_start));
  out << '\n';
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& n : names) out.push_back(parse_method(n));
  return out;
}

void cmd_explain(const ExplainOptions& o, const CLI::App& app, std::ostream& out) {
  require_file(o.data, "dataset");
  require_file(o.model, "model");
  const Dataset data = load_dataset(o.data);
  const Network<double> net = load_network(o.model);
  if (data.n_features() != net.n_inputs()) throw ShapeError("dataset width does not match the model");
  const std::vector<Method> methods = parse_methods(o.methods);
  AttributionParams params;
  params.ig_steps = o.ig_steps;
  params.lrp_epsilon = o.lrp_epsilon;

  std::vector<std::size_t> rows;
  std::mt19937_64 rng(o.seed);
  for (int s : o.sessions) {
    std::vector<std::size_t> in_session;
    for (std::size_t i = 0; i < data.size(); ++i)
      if (data.sessions[i] == s) in_session.push_back(i);
    if (in_session.empty()) throw std::runtime_error("session " + std::to_string(s) + " has no samples");
    if (o.limit > 0 && in_session.size() > o.limit) {
      std::shuffle(in_session.begin(), in_session.end(), rng);
      in_session.resize(o.limit);
      std::sort(in_session.begin(), in_session.end());
    }
    rows.insert(rows.end(), in_session.begin(), in_session.end());
  }
  const Dataset subset = data.subset(rows);
  const std::vector<int> predicted = predict_labels(net, subset.features);

  std::vector<RelevanceRecord> records;
  const fs::path dir = prepare_out_dir(o.out_dir);
  for (Method m : methods) {
    std::vector<ComponentRelevance> means;
    std::vector<Eigen::VectorXd> correct_maps;
    for (std::size_t i = 0; i < subset.size(); ++i) {
      const Eigen::VectorXd x = subset.features.row(static_cast<Eigen::Index>(i)).transpose();
      auto rel = explain(m, net, x, predicted[i], params);
      if (predicted[i] == subset.labels[i]) correct_maps.push_back(rel.values);
      records.push_back({m, subset.sample_ids[i], predicted[i], std::move(rel.values)});
    }
    // Mean relevance over the correctly classified explained samples.
    if (!correct_maps.empty()) {
      for (SchemeKind kind : kAllSchemes) {
        const ComponentScheme scheme(kind, data.layout);
        std::vector<ComponentRelevance> per_sample;
        for (const auto& v : correct_maps) per_sample.push_back(aggregate(v, scheme));
        means.push_back(mean_relevance(per_sample));
      }
    }
    auto comp = open_out(dir / ("components_" + to_string(m) + ".csv"));
    write_component_csv(comp, means);
  }
  auto rel_out = open_out(dir / "relevance.csv");
  write_relevance_csv(rel_out, records, data.layout.n_features());
  write_echo(app, dir / "explain.config.toml");
  out << "explained " << subset.size() << " samples with " << methods.size() << " methods\n";
}

void cmd_evaluate(const EvaluateOptions& o, const CLI::App& app, std::ostream& out) {
  require_file(o.data, "dataset");
  require_file(o.model, "model");
  const Dataset data = load_dataset(o.data);
  const Network<double> net = load_network(o.model);

  ProtocolConfig cfg;
  cfg.attribution.ig_steps = o.ig_steps;
  cfg.attribution.lrp_epsilon = o.lrp_epsilon;
  cfg.abs_relevance = o.abs_relevance;
  cfg.presumed_per_class = o.presumed_per_class;
  cfg.score = parse_score_kind(o.score);
  cfg.max_eval_samples = o.max_samples;
  cfg.max_train_samples = o.max_train_samples;
  cfg.seed = o.seed;
  RelevanceStore store;
  if (!o.relevance.empty()) {
    require_file(o.relevance, "relevance file");
    std::ifstream in(o.relevance);
    const auto records = read_relevance_csv(in);
    store = make_relevance_store(records);
    cfg.precomputed = &store;
  }
  const std::vector<Method> methods = parse_methods(o.methods);
  std::vector<SchemeKind> schemes;
  for (const auto& s : o.schemes) schemes.push_back(parse_scheme(s));

  const Dataset train_rows = training_part(data, o.train_session, o.test_trial_start);
  const Dataset intra = held_out_part(data, o.train_session, o.test_trial_start);
  std::vector<std::size_t> inter_rows;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (std::find(o.inter_sessions.begin(), o.inter_sessions.end(), data.sessions[i]) != o.inter_sessions.end())
      inter_rows.push_back(i);
  if (std::find(o.inter_sessions.begin(), o.inter_sessions.end(), o.train_session) != o.inter_sessions.end())
    throw std::invalid_argument("inter-session list must not contain the training session");

  ExperimentResult result = run_protocol(net, train_rows, intra, methods, schemes, cfg);
  if (!o.inter_sessions.empty())
    result.merge(run_protocol(net, train_rows, data.subset(inter_rows), methods, schemes, cfg));

  const fs::path dir = prepare_out_dir(o.out_dir);
  auto curves = open_out(dir / "curves.csv");
  write_curves_csv(curves, result);
  auto metrics = open_out(dir / "metrics.csv");
  write_metrics_csv(metrics, result);
  write_echo(app, dir / "evaluate.config.toml");
  out << "evaluated " << result.curves.size() << " curves";
  for (const auto& [mode, n] : result.n_samples) out << ", " << to_string(mode) << " samples " << n;
  out << '\n';
}

void cmd_report(const ReportOptions& o, const CLI::App& app, std::ostream& out) {
  std::vector<MetricRow> rows;
  for (const auto& path : o.metrics) {
    require_file(path, "metrics file");
    std::ifstream in(path);
    try {
      auto r = read_metrics_csv(in);
      rows.insert(rows.end(), r.begin(), r.end());
    } catch (const ParseError& e) {
      throw ParseError(e.line(), path + ": " + e.what());
    }
  }
  const fs::path dir = prepare_out_dir(o.out_dir);
  auto summary = open_out(dir / "summary.csv");
  write_summary_csv(summary, rows);
  write_echo(app, dir / "report.config.toml");
  out << "summarized " << rows.size() << " metric rows from " << o.metrics.size() << " files\n";
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"eegxai: attribution methods and perturbation faithfulness for EEG feature classifiers"};
  app.set_config("--config", "", "TOML key/value file with option values; flags override it");
  app.require_subcommand(1, 1);

  SynthOptions so;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic DE-feature dataset with planted relevance");
  synth->add_option("--out-dir", so.out_dir, "Output directory")->required();
  synth->add_option("--seed", so.cfg.seed, "Random seed")->capture_default_str();
  synth->add_option("--channels", so.cfg.n_channels, "Number of channels")->capture_default_str();
  synth->add_option("--bands", so.cfg.n_bands, "Number of frequency bands (<= 5)")->capture_default_str();
  synth->add_option("--classes", so.cfg.n_classes, "Number of classes")->capture_default_str();
  synth->add_option("--samples-per-class", so.cfg.samples_per_class_per_session, "Samples per class and session")->capture_default_str();
  synth->add_option("--sessions", so.cfg.n_sessions, "Number of sessions")->capture_default_str();
  synth->add_option("--trials", so.cfg.trials_per_session, "Trials per session")->capture_default_str();
  synth->add_option("--subject", so.cfg.subject, "Subject id")->capture_default_str();
  synth->add_option("--informative", so.cfg.n_informative, "Number of informative features")->capture_default_str();
  synth->add_option("--separation", so.cfg.class_separation, "Class mean magnitude on informative features")->capture_default_str();
  synth->add_option("--shift", so.cfg.session_shift, "Fraction of informative features re-drawn per session")->capture_default_str();
  synth->add_option("--noise", so.cfg.noise_sigma, "Noise standard deviation")->capture_default_str();

  TrainOptions to;
  auto* train_cmd = app.add_subcommand("train", "Train the classifier on one session");
  train_cmd->add_option("--data", to.data, "Dataset CSV")->required();
  train_cmd->add_option("--out-dir", to.out_dir, "Output directory")->required();
  train_cmd->add_option("--seed", to.cfg.seed, "Random seed")->capture_default_str();
  train_cmd->add_option("--train-session", to.train_session, "Session used for training")->capture_default_str();
  train_cmd->add_option("--test-trial-start", to.test_trial_start,
                        "First held-out trial of the training session (0 = train on every trial)")->capture_default_str();
  train_cmd->add_option("--hidden", to.cfg.hidden_layers, "Hidden layer widths")->delimiter(',')->capture_default_str();
  train_cmd->add_option("--lr", to.cfg.learning_rate, "Initial learning rate")->capture_default_str();
  train_cmd->add_option("--patience", to.cfg.patience, "Early-stopping patience (epochs)")->capture_default_str();
  train_cmd->add_option("--plateau-window", to.cfg.plateau_window, "Epochs without improvement before LR decay")->capture_default_str();
  train_cmd->add_option("--plateau-factor", to.cfg.plateau_factor, "LR decay factor")->capture_default_str();
  train_cmd->add_option("--validation-fraction", to.cfg.validation_fraction, "Stratified validation fraction")->capture_default_str();
  train_cmd->add_option("--max-epochs", to.cfg.max_epochs, "Epoch limit")->capture_default_str();
  train_cmd->add_option("--batch-size", to.cfg.batch_size, "Mini-batch size")->capture_default_str();

  ExplainOptions eo;
  auto* explain_cmd = app.add_subcommand("explain", "Write relevance maps for dataset rows");
  explain_cmd->add_option("--data", eo.data, "Dataset CSV")->required();
  explain_cmd->add_option("--model", eo.model, "Model JSON")->required();
  explain_cmd->add_option("--out-dir", eo.out_dir, "Output directory")->required();
  explain_cmd->add_option("--methods", eo.methods, "Attribution methods")->delimiter(',')->capture_default_str();
  explain_cmd->add_option("--sessions", eo.sessions, "Sessions to explain")->delimiter(',')->capture_default_str();
  explain_cmd->add_option("--limit", eo.limit, "Rows sampled per session (0 = all)")->capture_default_str();
  explain_cmd->add_option("--ig-steps", eo.ig_steps, "Integrated-gradients steps")->capture_default_str();
  explain_cmd->add_option("--lrp-epsilon", eo.lrp_epsilon, "LRP stabilizer")->capture_default_str();
  explain_cmd->add_option("--seed", eo.seed, "Random seed for row sampling")->capture_default_str();

  EvaluateOptions vo;
  auto* eval_cmd = app.add_subcommand("evaluate", "Run the intra/inter-session perturbation protocol");
  eval_cmd->add_option("--data", vo.data, "Dataset CSV")->required();
  eval_cmd->add_option("--model", vo.model, "Model JSON")->required();
  eval_cmd->add_option("--out-dir", vo.out_dir, "Output directory")->required();
  eval_cmd->add_option("--relevance", vo.relevance, "Relevance CSV from 'explain' to reuse");
  eval_cmd->add_option("--train-session", vo.train_session, "Session the model was trained on")->capture_default_str();
  eval_cmd->add_option("--test-trial-start", vo.test_trial_start,
                       "First held-out trial of the training session (0 = evaluate on every trial)")->capture_default_str();
  eval_cmd->add_option("--inter-sessions", vo.inter_sessions, "Sessions for the inter-session case")->delimiter(',')->capture_default_str();
  eval_cmd->add_option("--methods", vo.methods, "Attribution methods")->delimiter(',')->capture_default_str();
  eval_cmd->add_option("--schemes", vo.schemes, "Component schemes")->delimiter(',')->capture_default_str();
  eval_cmd->add_option("--ig-steps", vo.ig_steps, "Integrated-gradients steps")->capture_default_str();
  eval_cmd->add_option("--lrp-epsilon", vo.lrp_epsilon, "LRP stabilizer")->capture_default_str();
  eval_cmd->add_flag("--abs-relevance", vo.abs_relevance, "Rank components by |relevance|");
  eval_cmd->add_flag("--presumed-per-class", vo.presumed_per_class, "Average training relevance per class");
  eval_cmd->add_option("--score", vo.score, "Curve score: probability or logit")
      ->check(CLI::IsMember({"probability", "logit"}))
      ->capture_default_str();
  eval_cmd->add_option("--max-samples", vo.max_samples, "Evaluation samples per session case (0 = all)")->capture_default_str();
  eval_cmd->add_option("--max-train-samples", vo.max_train_samples, "Training samples for presumed relevance (0 = all)")->capture_default_str();
  eval_cmd->add_option("--seed", vo.seed, "Random seed")->capture_default_str();

  ReportOptions ro;
  auto* report_cmd = app.add_subcommand("report", "Summarize metric CSVs from several runs");
  report_cmd->add_option("--metrics", ro.metrics, "Metric CSV files")->required();
  report_cmd->add_option("--out-dir", ro.out_dir, "Output directory")->required();
  report_cmd->add_option("--seed", ro.seed, "Recorded seed")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "eegxai: usage error: " << one_line(e.what()) << '\n';
    return 2;
  }

  try {
    if (synth->parsed()) cmd_synth(so, *synth, out);
    else if (train_cmd->parsed()) cmd_train(to, *train_cmd, out);
    else if (explain_cmd->parsed()) cmd_explain(eo, *explain_cmd, out);
    else if (eval_cmd->parsed()) cmd_evaluate(vo, *eval_cmd, out);
    else if (report_cmd->parsed()) cmd_report(ro, *report_cmd, out);
  } catch (const std::exception& e) {
    err << "eegxai: error: " << one_line(e.what()) << '\n';
    return 1;
  }
  return 0;
}

}  // namespace eegxai
