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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bta/aggregation.hpp"
#include "bta/dataset.hpp"
#include "bta/forest.hpp"
#include "bta/metrics.hpp"

namespace bta {

/// A named aggregation strategy: "mv", "bta-eps" or "bta-b".
struct StrategySpec {
  std::string name;
  Strategy strategy;
};

/// Parses "mv", "bta-eps", "bta-b", or the pinned forms "bta-eps=<eps>" and
/// "bta-b=<B>". Bare forms take `epsilon` / `b`. Throws ArgumentError.
StrategySpec parseStrategy(std::string_view text, double epsilon = 1e-5, double b = 0.5);

/// Comma-separated list of parseStrategy items.
std::vector<StrategySpec> parseStrategyList(std::string_view text, double epsilon = 1e-5, double b = 0.5);

struct SplitOptions {
  std::optional<std::size_t> merge_classes;
  std::optional<std::size_t> train_limit;
};

struct BenchmarkSplits {
  Dataset train;
  Dataset test;  // relabelled into the training class space
};

/// Loads train/test files, truncates and merges the training split, and maps
/// the test split through the training dictionary.
BenchmarkSplits loadBenchmarkSplits(const std::filesystem::path& train_path,
                                    const std::filesystem::path& test_path, const SplitOptions& options);

/// Test split relabelled into a trained model's class space.
Dataset alignToModel(const Dataset& test, const ForestModel& model);

/// Scores every test sample with `strategy` and returns the confusion matrix.
ConfusionMatrix evaluateStrategy(const ForestModel& model, const VoteTable& votes, const Dataset& test,
                                 const Strategy& strategy, std::size_t num_threads = 1);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample (n-1) deviation; 0 for a single value
};

MeanStd meanStd(std::span<const double> values);

struct BenchConfig {
  ForestParams forest;  // seed is replaced by seed_base + repeat
  std::size_t repeats = 10;
  std::uint64_t seed_base = 0;
  std::vector<StrategySpec> strategies;
  std::size_t threads = 1;
  bool parallel_repeats = false;
  ClassId negative_class = 0;
};

struct BenchRow {
  std::string strategy;
  std::vector<EvalReport> runs;  // one per repeat
  MeanStd precision, recall, fscore;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::size_t trainings = 0;
};

/// Trains one forest per repeat (seed_base + r) and evaluates every strategy
/// on the shared test split from the same vote table.
BenchResult runBench(const Dataset& train, const Dataset& test, const BenchConfig& config);

/// Aligned table: strategy, then precision/recall/F-score as mean ± std.
std::string formatBenchTable(const BenchResult& result);

nlohmann::json reportToJson(const EvalReport& report, const LabelDict& labels);
nlohmann::json benchToJson(const BenchResult& result, const LabelDict& labels);

}  // namespace bta
