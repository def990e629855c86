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

#include "bta/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "bta/errors.hpp"
#include "bta/libsvm.hpp"
#include "bta/parallel.hpp"

namespace bta {
namespace {

double parsePositive(std::string_view text, std::string_view what) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size() || !(v > 0.0) || !std::isfinite(v)) {
    throw ArgumentError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

StrategySpec parseStrategy(std::string_view text, double epsilon, double b) {
  const auto eq = text.find('=');
  const std::string_view base = text.substr(0, eq);
  const std::optional<std::string_view> value =
      eq == std::string_view::npos ? std::nullopt : std::optional(text.substr(eq + 1));
  StrategySpec spec;
  spec.name = std::string(text);
  if (base == "mv" && !value) {
    spec.strategy = MajorityVoteStrategy{};
  } else if (base == "bta-eps") {
    SmoothingConfig cfg = EpsilonFloor{value ? parsePositive(*value, "epsilon") : epsilon};
    validateSmoothing(cfg);
    spec.strategy = BayesianStrategy{cfg};
  } else if (base == "bta-b") {
    SmoothingConfig cfg = KunchevaExponent{value ? parsePositive(*value, "B") : b};
    validateSmoothing(cfg);
    spec.strategy = BayesianStrategy{cfg};
  } else {
    throw ArgumentError("unknown strategy '" + std::string(text) + "' (expected mv, bta-eps or bta-b)");
  }
  return spec;
}

std::vector<StrategySpec> parseStrategyList(std::string_view text, double epsilon, double b) {
  std::vector<StrategySpec> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    out.push_back(parseStrategy(text.substr(start, comma - start), epsilon, b));
    start = comma + 1;
  }
  return out;
}

BenchmarkSplits loadBenchmarkSplits(const std::filesystem::path& train_path,
                                    const std::filesystem::path& test_path, const SplitOptions& options) {
  ParseOptions train_opts;
  train_opts.max_samples = options.train_limit;
  Dataset train = readLibsvmFile(train_path, train_opts).dataset;
  if (options.merge_classes) train = mergeBottomClasses(train, *options.merge_classes);
  ParseOptions test_opts;
  test_opts.expected_num_features = train.numFeatures();
  Dataset test = readLibsvmFile(test_path, test_opts).dataset;
  return {train, applyLabelDict(test, train.labelDict())};
}

Dataset alignToModel(const Dataset& test, const ForestModel& model) {
  return applyLabelDict(test, model.labels);
}

ConfusionMatrix evaluateStrategy(const ForestModel& model, const VoteTable& votes, const Dataset& test,
                                 const Strategy& strategy, std::size_t num_threads) {
  const auto predictions = decideAll(model, votes, strategy, num_threads);
  std::vector<ClassId> predicted;
  predicted.reserve(predictions.size());
  for (const auto& p : predictions) predicted.push_back(p.decision);
  return confusionFromPredictions(test.labels(), predicted, model.numClasses());
}

MeanStd meanStd(std::span<const double> values) {
  if (values.empty()) return {};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

BenchResult runBench(const Dataset& train, const Dataset& test, const BenchConfig& config) {
  if (config.repeats == 0) throw ArgumentError("repeats must be at least 1");
  if (config.strategies.empty()) throw ArgumentError("no strategies to benchmark");
  if (test.labelDict() != train.labelDict()) {
    throw ConfigurationError("test split is not in the training class space");
  }
  const std::size_t threads = resolveThreads(config.threads);
  // reports[repeat][strategy]
  std::vector<std::vector<EvalReport>> reports(config.repeats);
  auto run_one = [&](std::size_t r, std::size_t inner_threads) {
    ForestParams params = config.forest;
    params.seed = config.seed_base + r;
    const ForestModel model = trainForest(train, params, inner_threads);
    const VoteTable votes(model, test.samples(), inner_threads);
    for (const auto& spec : config.strategies) {
      reports[r].push_back(
          evaluate(evaluateStrategy(model, votes, test, spec.strategy, inner_threads), config.negative_class));
    }
  };
  if (config.parallel_repeats) {
    parallelFor(config.repeats, threads, [&](std::size_t r) { run_one(r, 1); });
  } else {
    for (std::size_t r = 0; r < config.repeats; ++r) run_one(r, threads);
  }

  BenchResult result;
  result.trainings = config.repeats;
  for (std::size_t s = 0; s < config.strategies.size(); ++s) {
    BenchRow row;
    row.strategy = config.strategies[s].name;
    std::vector<double> p, rc, f;
    for (std::size_t r = 0; r < config.repeats; ++r) {
      const EvalReport& rep = reports[r][s];
      row.runs.push_back(rep);
      p.push_back(rep.macro.precision);
      rc.push_back(rep.macro.recall);
      f.push_back(rep.macro.fscore);
    }
    row.precision = meanStd(p);
    row.recall = meanStd(rc);
    row.fscore = meanStd(f);
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string formatBenchTable(const BenchResult& result) {
  std::size_t width = 8;
  for (const auto& row : result.rows) width = std::max(width, row.strategy.size());
  auto cell = [](const MeanStd& v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f +- %.4f", v.mean, v.std);
    return std::string(buf);
  };
  std::ostringstream out;
  auto pad = [&](const std::string& s) { return s + std::string(width - s.size(), ' '); };
  auto head = [](const std::string& s) { return s + std::string(16 - s.size(), ' '); };
  out << pad("strategy") << "  " << head("precision") << "  " << head("recall") << "  " << "f-score\n";
  for (const auto& row : result.rows) {
    out << pad(row.strategy) << "  " << cell(row.precision) << "  " << cell(row.recall) << "  "
        << cell(row.fscore) << '\n';
  }
  return out.str();
}

nlohmann::json reportToJson(const EvalReport& report, const LabelDict& labels) {
  nlohmann::json per_class = nlohmann::json::array();
  for (const auto& [y, c] : report.per_class) {
    per_class.push_back({{"class", y},
                         {"label", labels.name(y)},
                         {"precision", c.precision},
                         {"recall", c.recall},
                         {"fscore", c.fscore}});
  }
  return {{"negative_class", report.negative_class},
          {"per_class", per_class},
          {"macro",
           {{"precision", report.macro.precision},
            {"recall", report.macro.recall},
            {"fscore", report.macro.fscore}}}};
}

nlohmann::json benchToJson(const BenchResult& result, const LabelDict& labels) {
  auto ms = [](const MeanStd& v) { return nlohmann::json{{"mean", v.mean}, {"std", v.std}}; };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : result.rows) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& rep : row.runs) runs.push_back(reportToJson(rep, labels));
    rows.push_back({{"strategy", row.strategy},
                    {"precision", ms(row.precision)},
                    {"recall", ms(row.recall)},
                    {"fscore", ms(row.fscore)},
                    {"runs", runs}});
  }
  return {{"trainings", result.trainings}, {"strategies", rows}};
}

}  // namespace bta
