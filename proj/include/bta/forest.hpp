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
#include <vector>

#include "bta/confusion.hpp"
#include "bta/dataset.hpp"
#include "bta/random.hpp"
#include "bta/tree.hpp"

namespace bta {

struct ForestParams {
  std::size_t num_trees = 100;
  TreeParams tree;
  std::uint64_t seed = 0;

  friend bool operator==(const ForestParams&, const ForestParams&) = default;
};

struct Bootstrap {
  std::vector<std::size_t> bag;  // n draws with replacement
  std::vector<std::size_t> oob;  // ascending indices never drawn
};

/// Standard bagging: n uniform draws with replacement from [0, n).
Bootstrap bootstrapSample(std::size_t n, Rng& rng);

/// A trained forest plus everything Bayesian aggregation needs: one raw
/// out-of-bag confusion matrix per tree and the training class priors.
struct ForestModel {
  std::vector<DecisionTree> trees;
  std::vector<ConfusionMatrix> oob_matrices;
  ClassPriors priors;
  LabelDict labels;
  ForestParams params;  // features_per_node stored resolved
  std::uint32_t num_features = 0;

  std::size_t numClasses() const { return labels.numClasses(); }
  std::size_t numTrees() const { return trees.size(); }

  /// Throws ArgumentError on any structural inconsistency.
  void validate() const;

  friend bool operator==(const ForestModel& a, const ForestModel& b) {
    return a.trees == b.trees && a.oob_matrices == b.oob_matrices &&
           a.priors.probs == b.priors.probs && a.labels == b.labels && a.params == b.params &&
           a.num_features == b.num_features;
  }
};

/// Trains params.num_trees trees on bootstrap bags and fills each tree's
/// OOB confusion matrix. Tree t draws from its own stream seeded by
/// mixSeed(seed, t), so the result does not depend on `num_threads`.
ForestModel trainForest(const Dataset& ds, const ForestParams& params, std::size_t num_threads = 1);

}  // namespace bta
