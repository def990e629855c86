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

#include "bta/forest.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include "bta/errors.hpp"
#include "bta/parallel.hpp"

namespace bta {

Bootstrap bootstrapSample(std::size_t n, Rng& rng) {
  if (n == 0) throw ArgumentError("cannot bootstrap an empty set");
  Bootstrap b;
  b.bag.resize(n);
  std::vector<bool> drawn(n, false);
  for (auto& idx : b.bag) {
    idx = static_cast<std::size_t>(rng.below(n));
    drawn[idx] = true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!drawn[i]) b.oob.push_back(i);
  }
  return b;
}

void ForestModel::validate() const {
  const std::size_t k = numClasses();
  if (k < 2) throw ArgumentError("model needs at least two classes");
  if (trees.empty()) throw ArgumentError("model has no trees");
  if (trees.size() != oob_matrices.size()) {
    throw ArgumentError("model has " + std::to_string(trees.size()) + " trees but " +
                        std::to_string(oob_matrices.size()) + " OOB matrices");
  }
  if (params.num_trees != trees.size()) throw ArgumentError("num_trees does not match tree count");
  if (num_features == 0) throw ArgumentError("model has no features");
  if (priors.probs.size() != k) throw ArgumentError("prior vector length differs from class count");
  double sum = 0.0;
  for (double p : priors.probs) {
    if (!(p > 0.0 && p <= 1.0)) throw ArgumentError("class prior outside (0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ArgumentError("class priors do not sum to 1");
  for (std::size_t t = 0; t < trees.size(); ++t) {
    trees[t].validate(num_features, k);
    if (oob_matrices[t].numClasses() != k) {
      throw ArgumentError("OOB matrix " + std::to_string(t) + " is not " + std::to_string(k) + "x" +
                          std::to_string(k));
    }
  }
}

ForestModel trainForest(const Dataset& ds, const ForestParams& params, std::size_t num_threads) {
  if (params.num_trees == 0) throw ArgumentError("num_trees must be at least 1");
  if (ds.numClasses() < 2) throw ArgumentError("training needs at least two classes");
  ForestModel model;
  model.priors = classPriors(ds);
  model.labels = ds.labelDict();
  model.num_features = ds.numFeatures();
  model.params = params;
  model.params.tree.features_per_node = resolveFeaturesPerNode(params.tree, ds.numFeatures());
  model.trees.resize(params.num_trees);
  model.oob_matrices.resize(params.num_trees);

  const DenseColumns columns(ds);
  const std::size_t k = ds.numClasses();
  parallelFor(params.num_trees, resolveThreads(num_threads), [&](std::size_t t) {
    Rng rng(mixSeed(params.seed, t));
    const Bootstrap boot = bootstrapSample(ds.size(), rng);
    DecisionTree tree = trainTree(columns, ds.labels(), k, boot.bag, model.params.tree, rng);
    ConfusionMatrix oob(k);
    for (std::size_t r : boot.oob) {
      oob.add(ds.label(r), tree.route([&](std::uint32_t f) { return columns.at(r, f); }));
    }
    model.trees[t] = std::move(tree);
    model.oob_matrices[t] = std::move(oob);
  });
  for (std::size_t t = 0; t < params.num_trees; ++t) {
    if (model.oob_matrices[t].total() == 0) {
      std::clog << "warning: tree " << t << " has an empty out-of-bag set; its conditional rows are uniform\n";
    }
  }
  return model;
}

}  // namespace bta
