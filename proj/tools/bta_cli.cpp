/* Copyright 2026 The btaforest Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

// Command-line harness: train, evaluate and bench.
#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "bta/aggregation.hpp"
#include "bta/bench.hpp"
#include "bta/errors.hpp"
#include "bta/forest.hpp"
#include "bta/libsvm.hpp"
#include "bta/metrics.hpp"
#include "bta/model_io.hpp"

namespace {

constexpr int kRuntimeFailure = 1;
constexpr int kUsageError = 2;

std::size_t parseFeaturesPerNode(const std::string& text) {
  if (text == "sqrt") return 0;
  std::size_t pos = 0;
  const auto v = std::stoul(text, &pos);
  if (pos != text.size() || v == 0) throw bta::ArgumentError("--features-per-node must be 'sqrt' or a positive integer");
  return v;
}

const CLI::Validator kFeaturesPerNode(
    [](std::string& s) -> std::string {
      if (s == "sqrt") return {};
      if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || std::stoul(s) == 0) {
        return "must be 'sqrt' or a positive integer";
      }
      return {};
    },
    "sqrt|N");

const CLI::Validator kNegativeClass(
    [](std::string& s) -> std::string {
      if (s == "majority") return {};
      if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) return "must be 'majority' or a class id";
      return {};
    },
    "majority|ID");

// Class id for --negative-class, checked against the model's class count.
bta::ClassId resolveNegativeClass(const std::string& text, const bta::ClassPriors& priors) {
  if (text == "majority") return bta::majorityClass(priors);
  const auto id = std::stoul(text);
  if (id >= priors.probs.size()) {
    throw bta::ArgumentError("--negative-class " + text + " is not below the class count " +
                             std::to_string(priors.probs.size()));
  }
  return static_cast<bta::ClassId>(id);
}

struct TrainArgs {
  std::string train, model;
  std::size_t trees = 100;
  std::uint64_t seed = 0;
  std::size_t min_split = 2;
  std::string features_per_node = "sqrt";
  std::optional<std::size_t> merge_classes, train_limit;
  std::size_t threads = 0;
};

struct EvaluateArgs {
  std::string model, test, strategy = "bta-eps";
  double epsilon = 1e-5, b = 0.5;
  std::optional<std::size_t> merge_classes;
  std::string negative_class = "0";
  std::string report, predictions;
  std::size_t threads = 0;
};

struct BenchArgs {
  std::string train, test;
  std::optional<std::size_t> merge_classes, train_limit;
  std::size_t repeats = 10, trees = 100, min_split = 2, threads = 0;
  std::string features_per_node = "sqrt";
  std::string strategies = "mv,bta-eps";
  double epsilon = 1e-5, b = 0.5;
  std::uint64_t seed_base = 0;
  bool parallel_repeats = false;
  std::string negative_class = "0";
  std::string report;
};

void writeJson(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw bta::IoError("cannot write " + path);
}

int cmdTrain(const TrainArgs& a) {
  bta::ParseOptions opts;
  opts.max_samples = a.train_limit;
  bta::Dataset ds = bta::readLibsvmFile(a.train, opts).dataset;
  if (a.merge_classes) ds = bta::mergeBottomClasses(ds, *a.merge_classes);

  bta::ForestParams params;
  params.num_trees = a.trees;
  params.seed = a.seed;
  params.tree.min_samples_split = a.min_split;
  params.tree.features_per_node = parseFeaturesPerNode(a.features_per_node);
  const bta::ForestModel model = bta::trainForest(ds, params, a.threads);
  bta::saveModelFile(model, a.model);

  std::cout << "samples " << ds.size() << "\nfeatures " << ds.numFeatures() << "\nclasses "
            << ds.numClasses() << '\n';
  const auto counts = ds.classCounts();
  for (bta::ClassId y = 0; y < counts.size(); ++y) {
    std::cout << "class " << y << " label=" << ds.labelDict().name(y) << " count=" << counts[y]
              << " prior=" << bta::formatDouble(model.priors.probs[y]) << '\n';
  }
  std::uint64_t lo = UINT64_MAX, hi = 0, sum = 0;
  for (const auto& m : model.oob_matrices) {
    lo = std::min(lo, m.total());
    hi = std::max(hi, m.total());
    sum += m.total();
  }
  std::cout << "trees " << model.numTrees() << " features_per_node " << model.params.tree.features_per_node
            << "\noob_size min=" << lo << " mean=" << static_cast<double>(sum) / model.numTrees()
            << " max=" << hi << '\n';
  return 0;
}

int cmdEvaluate(const EvaluateArgs& a) {
  const bta::ForestModel model = bta::loadModelFile(a.model);
  if (a.merge_classes && *a.merge_classes != model.numClasses()) {
    throw bta::ConfigurationError("--merge-classes " + std::to_string(*a.merge_classes) +
                                  " does not match the model's " + std::to_string(model.numClasses()) +
                                  " classes");
  }
  bta::ParseOptions opts;
  opts.expected_num_features = model.num_features;
  const bta::Dataset test = bta::alignToModel(bta::readLibsvmFile(a.test, opts).dataset, model);
  const bta::StrategySpec spec = bta::parseStrategy(a.strategy, a.epsilon, a.b);

  const bta::VoteTable votes(model, test.samples(), a.threads);
  const auto predictions = bta::decideAll(model, votes, spec.strategy, a.threads);
  std::vector<bta::ClassId> predicted;
  for (const auto& p : predictions) predicted.push_back(p.decision);
  const auto report = bta::evaluate(bta::confusionFromPredictions(test.labels(), predicted, model.numClasses()),
                                    resolveNegativeClass(a.negative_class, model.priors));
  std::cout << "strategy " << spec.name << '\n' << bta::formatReportText(report, model.labels);

  if (!a.report.empty()) {
    auto doc = bta::reportToJson(report, model.labels);
    doc["strategy"] = spec.name;
    writeJson(a.report, doc);
  }
  if (!a.predictions.empty()) {
    std::vector<std::string> names;
    for (bta::ClassId y = 0; y < model.numClasses(); ++y) names.push_back(model.labels.name(y));
    std::vector<bta::PredictionRow> rows;
    rows.reserve(predictions.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) {
      bta::PredictionRow row{i, names[predictions[i].decision], {}};
      if (predictions[i].scores) {
        row.scores = predictions[i].scores->log_scores;
      } else {
        row.scores.assign(model.numClasses(), 0.0);
        for (bta::ClassId v : votes.votes(i)) row.scores[v] += 1.0 / static_cast<double>(model.numTrees());
      }
      rows.push_back(std::move(row));
    }
    std::ofstream out(a.predictions);
    if (!out) throw bta::IoError("cannot write " + a.predictions);
    bta::writePredictions(out, names, rows);
  }
  return 0;
}

int cmdBench(const BenchArgs& a) {
  const auto strategies = bta::parseStrategyList(a.strategies, a.epsilon, a.b);
  const auto splits = bta::loadBenchmarkSplits(a.train, a.test, {a.merge_classes, a.train_limit});
  bta::BenchConfig cfg;
  cfg.forest.num_trees = a.trees;
  cfg.forest.tree.min_samples_split = a.min_split;
  cfg.forest.tree.features_per_node = parseFeaturesPerNode(a.features_per_node);
  cfg.repeats = a.repeats;
  cfg.seed_base = a.seed_base;
  cfg.strategies = strategies;
  cfg.threads = a.threads;
  cfg.parallel_repeats = a.parallel_repeats;
  const auto priors = bta::classPriors(splits.train);
  cfg.negative_class = resolveNegativeClass(a.negative_class, priors);
  const auto result = bta::runBench(splits.train, splits.test, cfg);
  std::cout << "train " << splits.train.size() << " test " << splits.test.size() << " features "
            << splits.train.numFeatures() << " classes " << splits.train.numClasses() << " negative_class "
            << cfg.negative_class << " prior " << bta::formatDouble(priors.probs[cfg.negative_class]) << " repeats " << a.repeats << " trees " << a.trees << "\n"
            << bta::formatBenchTable(result);
  if (!a.report.empty()) writeJson(a.report, bta::benchToJson(result, splits.train.labelDict()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision forests with majority voting and Bayesian tree aggregation"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* tr = app.add_subcommand("train", "Train a forest and save it");
  tr->add_option("--train", train.train, "Training data (LibSVM, .gz ok)")->required()->check(CLI::ExistingFile);
  tr->add_option("--model", train.model, "Output model file")->required();
  tr->add_option("--trees", train.trees, "Number of trees")->check(CLI::PositiveNumber);
  tr->add_option("--seed", train.seed, "Random seed");
  tr->add_option("--min-split", train.min_split, "Minimum samples to split a node")->check(CLI::Range(2, 1 << 30));
  tr->add_option("--features-per-node", train.features_per_node, "'sqrt' or a count")->check(kFeaturesPerNode);
  tr->add_option("--merge-classes", train.merge_classes, "Fold the bottom classes until this many remain")
      ->check(CLI::Range(2, 1 << 30));
  tr->add_option("--train-limit", train.train_limit, "Use only the first N samples")->check(CLI::PositiveNumber);
  tr->add_option("--threads", train.threads, "Worker threads (0 = all cores)");

  EvaluateArgs ev;
  auto* evc = app.add_subcommand("evaluate", "Evaluate a saved model on a test set");
  evc->add_option("--model", ev.model, "Model file")->required()->check(CLI::ExistingFile);
  evc->add_option("--test", ev.test, "Test data (LibSVM, .gz ok)")->required()->check(CLI::ExistingFile);
  evc->add_option("--strategy", ev.strategy, "mv | bta-eps | bta-b")
      ->check(CLI::IsMember({"mv", "bta-eps", "bta-b"}));
  evc->add_option("--epsilon", ev.epsilon, "Floor for bta-eps")->check(CLI::Range(0.0, 1.0));
  evc->add_option("--b", ev.b, "Exponent for bta-b")->check(CLI::PositiveNumber);
  evc->add_option("--merge-classes", ev.merge_classes, "Must equal the model's class count");
  evc->add_option("--negative-class", ev.negative_class, "Class left out of the macro average ('majority' or an id)")
      ->check(kNegativeClass);
  evc->add_option("--report", ev.report, "Write a JSON report here");
  evc->add_option("--predictions", ev.predictions, "Write per-sample predictions here");
  evc->add_option("--threads", ev.threads, "Worker threads (0 = all cores)");

  BenchArgs bench;
  auto* bc = app.add_subcommand("bench", "Repeated train/evaluate with mean and std");
  bc->add_option("--train", bench.train, "Training data")->required()->check(CLI::ExistingFile);
  bc->add_option("--test", bench.test, "Test data")->required()->check(CLI::ExistingFile);
  bc->add_option("--merge-classes", bench.merge_classes, "Final class count")->check(CLI::Range(2, 1 << 30));
  bc->add_option("--train-limit", bench.train_limit, "Use only the first N training samples")
      ->check(CLI::PositiveNumber);
  bc->add_option("--repeats", bench.repeats, "Repetitions")->check(CLI::PositiveNumber);
  bc->add_option("--trees", bench.trees, "Trees per forest")->check(CLI::PositiveNumber);
  bc->add_option("--min-split", bench.min_split, "Minimum samples to split a node")->check(CLI::Range(2, 1 << 30));
  bc->add_option("--features-per-node", bench.features_per_node, "'sqrt' or a count")->check(kFeaturesPerNode);
  bc->add_option("--strategies", bench.strategies, "Comma list of mv, bta-eps[=eps], bta-b[=B]");
  bc->add_option("--epsilon", bench.epsilon, "Floor for bare bta-eps")->check(CLI::Range(0.0, 1.0));
  bc->add_option("--b", bench.b, "Exponent for bare bta-b")->check(CLI::PositiveNumber);
  bc->add_option("--seed-base", bench.seed_base, "Repeat r trains with seed base + r");
  bc->add_option("--threads", bench.threads, "Worker threads (0 = all cores)");
  bc->add_flag("--parallel-repeats", bench.parallel_repeats, "Run repeats concurrently");
  bc->add_option("--negative-class", bench.negative_class, "Class left out of the macro average ('majority' or an id)")
      ->check(kNegativeClass);
  bc->add_option("--report", bench.report, "Write a JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*tr) return cmdTrain(train);
    if (*evc) return cmdEvaluate(ev);
    return cmdBench(bench);
  } catch (const bta::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}
