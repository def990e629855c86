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

#include "bta/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <utility>

#include "bta/errors.hpp"

namespace bta {

double featureValue(std::span<const FeatureEntry> x, std::uint32_t index) {
  auto it = std::lower_bound(x.begin(), x.end(), index,
                             [](const FeatureEntry& e, std::uint32_t i) { return e.index < i; });
  return (it != x.end() && it->index == index) ? it->value : 0.0;
}

LabelDict::LabelDict(std::vector<std::vector<std::string>> groups) : groups_(std::move(groups)) {
  for (ClassId id = 0; id < groups_.size(); ++id) {
    if (groups_[id].empty()) {
      throw ArgumentError("label dictionary class " + std::to_string(id) + " has no labels");
    }
    for (const auto& label : groups_[id]) {
      if (!index_.emplace(label, id).second) {
        throw ArgumentError("label '" + label + "' appears in more than one class");
      }
    }
  }
}

std::optional<ClassId> LabelDict::find(std::string_view original) const {
  auto it = index_.find(original);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string LabelDict::name(ClassId id) const {
  const auto& group = groups_.at(id);
  std::string out = group.front();
  for (std::size_t i = 1; i < group.size(); ++i) out += "+" + group[i];
  return out;
}

double parseNumericLabel(std::string_view token) {
  std::string_view digits = token;
  if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
  double value = 0.0;
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (digits.empty() || ec != std::errc() || end != digits.data() + digits.size()) {
    throw FormatError("non-numeric class label '" + std::string(token) + "'");
  }
  return value;
}

LabelDict buildLabelDict(std::span<const std::string> raw_labels) {
  if (raw_labels.empty()) throw ArgumentError("cannot build a label dictionary from no labels");
  std::set<std::pair<double, std::string>> ordered;
  for (const auto& label : raw_labels) ordered.emplace(parseNumericLabel(label), label);
  std::vector<std::vector<std::string>> groups;
  groups.reserve(ordered.size());
  for (const auto& entry : ordered) groups.push_back({entry.second});
  return LabelDict(std::move(groups));
}

Dataset::Dataset(std::vector<SampleVector> samples, std::vector<ClassId> labels,
                 std::uint32_t num_features, LabelDict dict)
    : samples_(std::move(samples)),
      labels_(std::move(labels)),
      num_features_(num_features),
      dict_(std::move(dict)) {
  if (samples_.empty()) throw ArgumentError("dataset has no samples");
  if (samples_.size() != labels_.size()) {
    throw ArgumentError("dataset has " + std::to_string(samples_.size()) + " samples but " +
                        std::to_string(labels_.size()) + " labels");
  }
  if (num_features_ == 0) throw ArgumentError("dataset needs at least one feature");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    std::uint32_t prev = 0;
    for (const auto& e : samples_[i]) {
      if (e.index <= prev || e.index > num_features_) {
        throw ArgumentError("sample " + std::to_string(i) + " has invalid feature index " +
                            std::to_string(e.index));
      }
      prev = e.index;
    }
    if (labels_[i] >= dict_.numClasses()) {
      throw ArgumentError("sample " + std::to_string(i) + " has class id " +
                          std::to_string(labels_[i]) + " outside the label dictionary");
    }
  }
}

std::vector<std::size_t> Dataset::classCounts() const {
  std::vector<std::size_t> counts(numClasses(), 0);
  for (ClassId y : labels_) ++counts[y];
  return counts;
}

ClassPriors classPriors(const Dataset& ds) {
  const auto counts = ds.classCounts();
  ClassPriors priors;
  priors.probs.reserve(counts.size());
  const double n = static_cast<double>(ds.size());
  for (ClassId y = 0; y < counts.size(); ++y) {
    if (counts[y] == 0) {
      throw DegenerateClassError("class '" + ds.labelDict().name(y) +
                                 "' has no samples; cannot estimate its prior");
    }
    priors.probs.push_back(static_cast<double>(counts[y]) / n);
  }
  return priors;
}

ClassId majorityClass(const ClassPriors& priors) {
  if (priors.probs.empty()) throw ArgumentError("no classes");
  return static_cast<ClassId>(std::max_element(priors.probs.begin(), priors.probs.end()) - priors.probs.begin());
}

Dataset mergeBottomClasses(const Dataset& ds, std::size_t final_class_count) {
  const std::size_t k = ds.numClasses();
  if (final_class_count < 2 || final_class_count > k) {
    throw ArgumentError("cannot merge " + std::to_string(k) + " classes into " +
                        std::to_string(final_class_count));
  }
  // Ids are already in ascending numeric label order, so the bottom classes
  // are ids 0..folded.
  const std::size_t folded = k - final_class_count;
  std::vector<std::vector<std::string>> groups(final_class_count);
  for (ClassId y = 0; y < k; ++y) {
    auto& target = groups[y <= folded ? 0 : y - folded];
    const auto& members = ds.labelDict().members(y);
    target.insert(target.end(), members.begin(), members.end());
  }
  std::vector<ClassId> labels(ds.labels());
  for (auto& y : labels) y = y <= folded ? 0 : static_cast<ClassId>(y - folded);
  return Dataset(ds.samples(), std::move(labels), ds.numFeatures(), LabelDict(std::move(groups)));
}

Dataset applyLabelDict(const Dataset& ds, const LabelDict& dict) {
  std::vector<ClassId> remap(ds.numClasses());
  for (ClassId y = 0; y < ds.numClasses(); ++y) {
    std::optional<ClassId> target;
    for (const auto& label : ds.labelDict().members(y)) {
      auto found = dict.find(label);
      if (!found) throw ConfigurationError("label '" + label + "' is unknown to the model");
      if (target && *target != *found) {
        throw ConfigurationError("class '" + ds.labelDict().name(y) +
                                 "' spans several classes of the target dictionary");
      }
      target = found;
    }
    remap[y] = *target;
  }
  std::vector<ClassId> labels(ds.labels());
  for (auto& y : labels) y = remap[y];
  return Dataset(ds.samples(), std::move(labels), ds.numFeatures(), dict);
}

}  // namespace bta
