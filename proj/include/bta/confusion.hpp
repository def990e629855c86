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

namespace bta {

/// K x K count matrix: row = true class, column = predicted class.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::size_t num_classes);
  /// Row-major counts; size must be num_classes^2.
  ConfusionMatrix(std::size_t num_classes, std::vector<std::uint64_t> counts);

  std::size_t numClasses() const { return k_; }
  std::uint64_t count(ClassId truth, ClassId predicted) const { return counts_[truth * k_ + predicted]; }
  std::uint64_t rowTotal(ClassId truth) const { return row_totals_[truth]; }
  std::uint64_t total() const;
  std::span<const std::uint64_t> row(ClassId truth) const {
    return {counts_.data() + truth * k_, k_};
  }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  void add(ClassId truth, ClassId predicted, std::uint64_t n = 1) {
    counts_[truth * k_ + predicted] += n;
    row_totals_[truth] += n;
  }

  friend bool operator==(const ConfusionMatrix& a, const ConfusionMatrix& b) {
    return a.k_ == b.k_ && a.counts_ == b.counts_;
  }

 private:
  std::size_t k_ = 0;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> row_totals_;
};

/// Row `truth` divided by its total: the estimate of P(tree says l | true class).
/// An empty row yields the uniform vector 1/K.
std::vector<double> conditionalRow(const ConfusionMatrix& m, ClassId truth);

/// Tallies (truth, predicted) pairs. Throws ArgumentError on length mismatch,
/// empty input, or an id >= num_classes.
ConfusionMatrix confusionFromPredictions(std::span<const ClassId> truth,
                                         std::span<const ClassId> predicted,
                                         std::size_t num_classes);

}  // namespace bta
