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

// Synthetic data helpers shared by the test suites.
#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bta/dataset.hpp"

namespace bta::testing {

/// Gaussian blobs, one per class, with class sizes in `counts`. Every
/// `sparsity`-th feature is left implicit (0.0) to exercise sparse paths.
inline Dataset makeBlobs(const std::vector<std::size_t>& counts, std::uint32_t num_features, double spread,
                         std::uint64_t seed, std::uint32_t sparsity = 0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, spread);
  std::uniform_real_distribution<double> center(-2.0, 2.0);
  std::vector<std::vector<double>> centers(counts.size(), std::vector<double>(num_features));
  for (auto& c : centers) {
    for (auto& v : c) v = center(gen);
  }
  std::vector<SampleVector> samples;
  std::vector<ClassId> labels;
  for (ClassId y = 0; y < counts.size(); ++y) {
    for (std::size_t i = 0; i < counts[y]; ++i) {
      SampleVector x;
      for (std::uint32_t f = 1; f <= num_features; ++f) {
        if (sparsity != 0 && f % sparsity == 0) continue;
        x.push_back({f, centers[y][f - 1] + noise(gen)});
      }
      samples.push_back(std::move(x));
      labels.push_back(y);
    }
  }
  // Interleave classes so prefixes are not single-class.
  std::vector<std::size_t> order(samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), gen);
  std::vector<SampleVector> s2;
  std::vector<ClassId> l2;
  for (auto i : order) {
    s2.push_back(samples[i]);
    l2.push_back(labels[i]);
  }
  std::vector<std::vector<std::string>> groups;
  for (std::size_t y = 0; y < counts.size(); ++y) groups.push_back({std::to_string(y + 1)});
  return Dataset(std::move(s2), std::move(l2), num_features, LabelDict(std::move(groups)));
}

}  // namespace bta::testing
