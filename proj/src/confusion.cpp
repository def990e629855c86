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

#include "bta/confusion.hpp"

#include <numeric>
#include <string>
#include <utility>

#include "bta/errors.hpp"

namespace bta {

ConfusionMatrix::ConfusionMatrix(std::size_t num_classes)
    : k_(num_classes), counts_(num_classes * num_classes, 0), row_totals_(num_classes, 0) {}

ConfusionMatrix::ConfusionMatrix(std::size_t num_classes, std::vector<std::uint64_t> counts)
    : k_(num_classes), counts_(std::move(counts)), row_totals_(num_classes, 0) {
  if (counts_.size() != k_ * k_) {
    throw ArgumentError("confusion matrix needs " + std::to_string(k_ * k_) + " counts, got " +
                        std::to_string(counts_.size()));
  }
  for (std::size_t y = 0; y < k_; ++y) {
    row_totals_[y] = std::accumulate(counts_.begin() + y * k_, counts_.begin() + (y + 1) * k_,
                                     std::uint64_t{0});
  }
}

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(row_totals_.begin(), row_totals_.end(), std::uint64_t{0});
}

std::vector<double> conditionalRow(const ConfusionMatrix& m, ClassId truth) {
  const std::size_t k = m.numClasses();
  const std::uint64_t n = m.rowTotal(truth);
  if (n == 0) return std::vector<double>(k, 1.0 / static_cast<double>(k));
  std::vector<double> row(k);
  for (ClassId l = 0; l < k; ++l) {
    row[l] = static_cast<double>(m.count(truth, l)) / static_cast<double>(n);
  }
  return row;
}

ConfusionMatrix confusionFromPredictions(std::span<const ClassId> truth,
                                         std::span<const ClassId> predicted,
                                         std::size_t num_classes) {
  if (truth.size() != predicted.size()) {
    throw ArgumentError("got " + std::to_string(truth.size()) + " true labels but " +
                        std::to_string(predicted.size()) + " predictions");
  }
  if (truth.empty()) throw ArgumentError("no predictions to tally");
  ConfusionMatrix m(num_classes);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] >= num_classes || predicted[i] >= num_classes) {
      throw ArgumentError("class id out of range at position " + std::to_string(i));
    }
    m.add(truth[i], predicted[i]);
  }
  return m;
}

}  // namespace bta
