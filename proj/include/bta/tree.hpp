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
#include <span>
#include <vector>

#include "bta/dataset.hpp"
#include "bta/random.hpp"

namespace bta {

struct TreeParams {
  /// Nodes with fewer samples become leaves. Must be >= 2.
  std::size_t min_samples_split = 2;
  /// Candidate features drawn per node; 0 selects floor(sqrt(M)).
  std::size_t features_per_node = 0;
  /// 0 means unlimited.
  std::size_t max_depth = 0;

  friend bool operator==(const TreeParams&, const TreeParams&) = default;
};

/// features_per_node with the sqrt default applied; validates the params
/// against a feature count M and throws ArgumentError when out of range.
std::size_t resolveFeaturesPerNode(const TreeParams& params, std::uint32_t num_features);

/// Preorder node. Internal nodes have feature >= 1; their left child is the
/// next node and `right` indexes the right child. Leaves have feature == 0.
struct TreeNode {
  std::uint32_t feature = 0;
  double threshold = 0.0;
  std::uint32_t right = 0;
  ClassId label = 0;

  bool isLeaf() const { return feature == 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class DecisionTree {
 public:
  DecisionTree() = default;
  /// Throws ArgumentError unless `nodes` is a well-formed preorder tree.
  explicit DecisionTree(std::vector<TreeNode> nodes);

  static DecisionTree leaf(ClassId label) { return DecisionTree({TreeNode{0, 0.0, 0, label}}); }

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t depth() const;
  std::size_t numLeaves() const;

  /// Routes by `value(feature)`; value <= threshold goes left.
  template <typename ValueFn>
  ClassId route(ValueFn&& value) const {
    std::size_t i = 0;
    while (!nodes_[i].isLeaf()) {
      const TreeNode& n = nodes_[i];
      i = value(n.feature) <= n.threshold ? i + 1 : n.right;
    }
    return nodes_[i].label;
  }

  ClassId predict(std::span<const FeatureEntry> x) const {
    return route([x](std::uint32_t f) { return featureValue(x, f); });
  }

  /// Checks feature indices against M and leaf labels against K.
  void validate(std::uint32_t num_features, std::size_t num_classes) const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

/// Column-major dense copy of a dataset's features, used during training.
class DenseColumns {
 public:
  explicit DenseColumns(const Dataset& ds);

  std::size_t numRows() const { return rows_; }
  std::uint32_t numFeatures() const { return features_; }
  /// Column of 1-based feature `f`.
  std::span<const double> column(std::uint32_t f) const {
    return {values_.data() + static_cast<std::size_t>(f - 1) * rows_, rows_};
  }
  double at(std::size_t row, std::uint32_t f) const {
    return values_[static_cast<std::size_t>(f - 1) * rows_ + row];
  }

 private:
  std::size_t rows_;
  std::uint32_t features_;
  std::vector<double> values_;
};

/// Gini impurity 1 - sum p_k^2 of a class histogram.
double giniImpurity(std::span<const std::size_t> class_counts);

/// Grows an unpruned CART tree on `rows` (duplicates allowed, as in a
/// bootstrap bag) using Gini splits on a fresh random feature subset at
/// every node.
DecisionTree trainTree(const DenseColumns& columns, std::span<const ClassId> labels,
                       std::size_t num_classes, std::span<const std::size_t> rows,
                       const TreeParams& params, Rng& rng);

DecisionTree trainTree(const Dataset& ds, std::span<const std::size_t> rows,
                       const TreeParams& params, Rng& rng);

}  // namespace bta
