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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bta {

/// 0-based index into a LabelDict.
using ClassId = std::uint32_t;

/// One stored coordinate of a sparse sample. Feature indices are 1-based.
struct FeatureEntry {
  std::uint32_t index;
  double value;

  friend bool operator==(const FeatureEntry&, const FeatureEntry&) = default;
};

/// Sparse sample: strictly ascending indices, absent indices read as 0.0.
using SampleVector = std::vector<FeatureEntry>;

/// Value of feature `index` (1-based) in `x`, 0.0 when absent.
double featureValue(std::span<const FeatureEntry> x, std::uint32_t index);

/// Maps original label strings onto dense class ids.
///
/// Every class owns one or more original labels. Freshly built
/// dictionaries are bijective; merging folds several originals into one
/// class, and the dictionary keeps all of them so test splits can be
/// remapped through it.
class LabelDict {
 public:
  LabelDict() = default;
  explicit LabelDict(std::vector<std::vector<std::string>> groups);

  std::size_t numClasses() const { return groups_.size(); }
  std::optional<ClassId> find(std::string_view original) const;
  const std::vector<std::string>& members(ClassId id) const { return groups_.at(id); }
  /// Display name: members joined with '+'.
  std::string name(ClassId id) const;
  const std::vector<std::vector<std::string>>& groups() const { return groups_; }

  friend bool operator==(const LabelDict& a, const LabelDict& b) { return a.groups_ == b.groups_; }

 private:
  std::vector<std::vector<std::string>> groups_;
  std::map<std::string, ClassId, std::less<>> index_;
};

/// Orders distinct labels by numeric value (ties by spelling) and assigns
/// ascending ids. Throws FormatError on a non-numeric label.
LabelDict buildLabelDict(std::span<const std::string> raw_labels);

/// Numeric interpretation of a label token; throws FormatError.
double parseNumericLabel(std::string_view token);

/// Immutable labelled sample collection.
class Dataset {
 public:
  Dataset(std::vector<SampleVector> samples, std::vector<ClassId> labels,
          std::uint32_t num_features, LabelDict dict);

  std::size_t size() const { return samples_.size(); }
  std::uint32_t numFeatures() const { return num_features_; }
  std::size_t numClasses() const { return dict_.numClasses(); }

  const std::vector<SampleVector>& samples() const { return samples_; }
  const SampleVector& sample(std::size_t i) const { return samples_[i]; }
  const std::vector<ClassId>& labels() const { return labels_; }
  ClassId label(std::size_t i) const { return labels_[i]; }
  const LabelDict& labelDict() const { return dict_; }

  /// Per-class sample counts, length numClasses().
  std::vector<std::size_t> classCounts() const;

 private:
  std::vector<SampleVector> samples_;
  std::vector<ClassId> labels_;
  std::uint32_t num_features_;
  LabelDict dict_;
};

struct ClassPriors {
  std::vector<double> probs;
};

/// Class prevalence. Throws DegenerateClassError when a class has no samples.
ClassPriors classPriors(const Dataset& ds);

/// Most prevalent class; ties go to the lowest id.
ClassId majorityClass(const ClassPriors& priors);

/// Folds the (K - final_class_count + 1) numerically lowest classes into
/// class 0; the others become 1..final_class_count-1 in order.
Dataset mergeBottomClasses(const Dataset& ds, std::size_t final_class_count);

/// Relabels `ds` through `dict` by original label strings, e.g. to put a test
/// split into a training split's (possibly merged) class space. Throws
/// ConfigurationError on a label `dict` does not know.
Dataset applyLabelDict(const Dataset& ds, const LabelDict& dict);

}  // namespace bta
