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

#include "bta/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "bta/errors.hpp"

namespace bta {

std::size_t resolveFeaturesPerNode(const TreeParams& params, std::uint32_t num_features) {
  if (params.min_samples_split < 2) throw ArgumentError("min_samples_split must be at least 2");
  if (num_features == 0) throw ArgumentError("need at least one feature");
  std::size_t k = params.features_per_node;
  if (k == 0) {
    k = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(num_features))));
    k = std::max<std::size_t>(k, 1);
  }
  if (k > num_features) {
    throw ArgumentError("features_per_node " + std::to_string(k) + " exceeds feature count " +
                        std::to_string(num_features));
  }
  return k;
}

DecisionTree::DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw ArgumentError("tree has no nodes");
  // A preorder walk must visit indices 0, 1, 2, ... exactly once.
  std::vector<std::size_t> pending{0};
  std::size_t expected = 0;
  while (!pending.empty()) {
    const std::size_t i = pending.back();
    pending.pop_back();
    if (i != expected || i >= nodes_.size()) {
      throw ArgumentError("tree node " + std::to_string(i) + " breaks preorder layout");
    }
    ++expected;
    const TreeNode& n = nodes_[i];
    if (!n.isLeaf()) {
      if (n.right <= i + 1 || n.right >= nodes_.size()) {
        throw ArgumentError("tree node " + std::to_string(i) + " has invalid right child " +
                            std::to_string(n.right));
      }
      pending.push_back(n.right);
      pending.push_back(i + 1);
    }
  }
  if (expected != nodes_.size()) {
    throw ArgumentError("tree has " + std::to_string(nodes_.size() - expected) + " unreachable nodes");
  }
}

std::size_t DecisionTree::depth() const {
  std::size_t deepest = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pending{{0, 0}};
  while (!pending.empty()) {
    auto [i, d] = pending.back();
    pending.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes_[i].isLeaf()) {
      pending.emplace_back(nodes_[i].right, d + 1);
      pending.emplace_back(i + 1, d + 1);
    }
  }
  return deepest;
}

std::size_t DecisionTree::numLeaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.isLeaf(); }));
}

void DecisionTree::validate(std::uint32_t num_features, std::size_t num_classes) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& n = nodes_[i];
    if (n.feature > num_features) {
      throw ArgumentError("tree node " + std::to_string(i) + " splits on feature " +
                          std::to_string(n.feature) + " > " + std::to_string(num_features));
    }
    if (!std::isfinite(n.threshold)) {
      throw ArgumentError("tree node " + std::to_string(i) + " has a non-finite threshold");
    }
    if (n.label >= num_classes) {
      throw ArgumentError("tree node " + std::to_string(i) + " has class " +
                          std::to_string(n.label) + " >= " + std::to_string(num_classes));
    }
  }
}

DenseColumns::DenseColumns(const Dataset& ds)
    : rows_(ds.size()), features_(ds.numFeatures()), values_(rows_ * features_, 0.0) {
  for (std::size_t r = 0; r < rows_; ++r) {
    for (const auto& e : ds.sample(r)) values_[static_cast<std::size_t>(e.index - 1) * rows_ + r] = e.value;
  }
}

double giniImpurity(std::span<const std::size_t> class_counts) {
  const double n = static_cast<double>(std::accumulate(class_counts.begin(), class_counts.end(), std::size_t{0}));
  if (n == 0) return 0.0;
  double sum_sq = 0.0;
  for (std::size_t c : class_counts) sum_sq += (static_cast<double>(c) / n) * (static_cast<double>(c) / n);
  return 1.0 - sum_sq;
}

namespace {

using Wide = __int128;

// Split quality is the Gini gain criterion rewritten over integers:
// minimizing weighted child impurity is maximizing
//   sum_k L_k^2 / nL + sum_k R_k^2 / nR,
// held as an exact fraction num/den so comparisons have no rounding.
struct Split {
  std::uint32_t feature = 0;
  double threshold = 0.0;
  Wide num = 0;
  Wide den = 1;
};

class TreeBuilder {
 public:
  TreeBuilder(const DenseColumns& columns, std::span<const ClassId> labels, std::size_t num_classes,
              const TreeParams& params, Rng& rng)
      : columns_(columns),
        labels_(labels),
        params_(params),
        features_per_node_(resolveFeaturesPerNode(params, columns.numFeatures())),
        rng_(rng),
        feature_order_(columns.numFeatures()),
        counts_(num_classes),
        left_counts_(num_classes) {
    std::iota(feature_order_.begin(), feature_order_.end(), std::uint32_t{1});
  }

  DecisionTree build(std::span<const std::size_t> rows) {
    rows_.assign(rows.begin(), rows.end());
    std::vector<TreeNode> nodes;
    struct Task {
      std::size_t begin, end, depth;
      std::size_t parent;  // node whose right child this is, or npos
    };
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<Task> pending{{0, rows_.size(), 0, kNone}};
    while (!pending.empty()) {
      const Task task = pending.back();
      pending.pop_back();
      const std::size_t index = nodes.size();
      if (task.parent != kNone) nodes[task.parent].right = static_cast<std::uint32_t>(index);

      std::fill(counts_.begin(), counts_.end(), 0);
      for (std::size_t i = task.begin; i < task.end; ++i) ++counts_[labels_[rows_[i]]];
      const auto plurality =
          static_cast<ClassId>(std::max_element(counts_.begin(), counts_.end()) - counts_.begin());
      const std::size_t n = task.end - task.begin;
      const bool pure = counts_[plurality] == n;
      const bool depth_capped = params_.max_depth != 0 && task.depth >= params_.max_depth;
      if (pure || n < params_.min_samples_split || depth_capped) {
        nodes.push_back({0, 0.0, 0, plurality});
        continue;
      }
      const Split split = findSplit(task.begin, task.end);
      if (split.feature == 0) {
        nodes.push_back({0, 0.0, 0, plurality});
        continue;
      }
      nodes.push_back({split.feature, split.threshold, 0, plurality});
      const auto column = columns_.column(split.feature);
      const double thr = split.threshold;
      auto mid = std::partition(rows_.begin() + task.begin, rows_.begin() + task.end,
                                [&](std::size_t r) { return column[r] <= thr; });
      const auto middle = static_cast<std::size_t>(mid - rows_.begin());
      pending.push_back({middle, task.end, task.depth + 1, index});
      pending.push_back({task.begin, middle, task.depth + 1, kNone});
    }
    return DecisionTree(std::move(nodes));
  }

 private:
  // Draws features lazily without replacement until features_per_node
  // non-constant ones have been scored or all features are exhausted.
  Split findSplit(std::size_t begin, std::size_t end) {
    const std::size_t n = end - begin;
    Wide parent_sq = 0;
    for (std::size_t c : counts_) parent_sq += static_cast<Wide>(c) * c;
    Split best;
    best.num = parent_sq;
    best.den = static_cast<Wide>(n);

    const std::size_t m = feature_order_.size();
    std::size_t scored = 0;
    for (std::size_t j = 0; j < m && scored < features_per_node_; ++j) {
      std::swap(feature_order_[j], feature_order_[j + rng_.below(m - j)]);
      const std::uint32_t f = feature_order_[j];
      const auto column = columns_.column(f);
      values_.resize(n);
      double lo = column[rows_[begin]];
      double hi = lo;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = rows_[begin + i];
        values_[i] = {column[r], labels_[r]};
        lo = std::min(lo, column[r]);
        hi = std::max(hi, column[r]);
      }
      if (lo == hi) continue;
      ++scored;
      std::sort(values_.begin(), values_.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });

      std::fill(left_counts_.begin(), left_counts_.end(), 0);
      std::int64_t left_sq = 0;
      auto right_sq = static_cast<std::int64_t>(parent_sq);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const ClassId y = values_[i].second;
        const auto l = static_cast<std::int64_t>(left_counts_[y]);
        const auto r = static_cast<std::int64_t>(counts_[y] - left_counts_[y]);
        left_sq += 2 * l + 1;
        right_sq -= 2 * r - 1;
        ++left_counts_[y];
        if (!(values_[i].first < values_[i + 1].first)) continue;
        const auto n_left = static_cast<Wide>(i + 1);
        const auto n_right = static_cast<Wide>(n - i - 1);
        const Wide num = n_right * left_sq + n_left * right_sq;
        const Wide den = n_left * n_right;
        if (num * best.den > best.num * den) {
          const double a = values_[i].first;
          const double b = values_[i + 1].first;
          double thr = std::midpoint(a, b);
          if (!(thr < b)) thr = a;
          best = {f, thr, num, den};
        }
      }
    }
    return best;
  }

  const DenseColumns& columns_;
  std::span<const ClassId> labels_;
  TreeParams params_;
  std::size_t features_per_node_;
  Rng& rng_;
  std::vector<std::uint32_t> feature_order_;
  std::vector<std::size_t> rows_;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> left_counts_;
  std::vector<std::pair<double, ClassId>> values_;
};

}  // namespace

DecisionTree trainTree(const DenseColumns& columns, std::span<const ClassId> labels,
                       std::size_t num_classes, std::span<const std::size_t> rows,
                       const TreeParams& params, Rng& rng) {
  if (rows.empty()) throw ArgumentError("cannot train a tree on zero rows");
  if (labels.size() != columns.numRows()) throw ArgumentError("label count does not match rows");
  for (std::size_t r : rows) {
    if (r >= columns.numRows()) throw ArgumentError("row index " + std::to_string(r) + " out of range");
  }
  TreeBuilder builder(columns, labels, num_classes, params, rng);
  return builder.build(rows);
}

DecisionTree trainTree(const Dataset& ds, std::span<const std::size_t> rows,
                       const TreeParams& params, Rng& rng) {
  if (rows.empty()) throw ArgumentError("cannot train a tree on zero rows");
  DenseColumns columns(ds);
  return trainTree(columns, ds.labels(), ds.numClasses(), rows, params, rng);
}

}  // namespace bta
