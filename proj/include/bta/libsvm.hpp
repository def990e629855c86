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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bta/dataset.hpp"

namespace bta {

struct ParseDiagnostics {
  std::size_t line_count = 0;
  std::size_t skipped_blank_lines = 0;
  std::uint32_t max_feature_index = 0;
};

struct ParseOptions {
  /// Lower bound for the feature count; the observed maximum index wins if larger.
  std::optional<std::uint32_t> expected_num_features;
  /// Stop after this many samples (for protocols that use a file prefix).
  std::optional<std::size_t> max_samples;
};

struct ParsedDataset {
  Dataset dataset;
  ParseDiagnostics diagnostics;
};

/// Reads `<label> <idx>:<val> ...` lines. Indices are 1-based and strictly
/// ascending; `#` starts a comment; blank lines are skipped. Errors carry
/// the 1-based line number.
ParsedDataset parseLibsvm(std::istream& in, const ParseOptions& options = {});

/// parseLibsvm on a file; a `.gz` suffix is decompressed transparently.
ParsedDataset readLibsvmFile(const std::filesystem::path& path, const ParseOptions& options = {});

/// Whole file contents, gunzipped when the name ends in `.gz`.
std::string readTextFile(const std::filesystem::path& path);

/// Emits `ds` in LibSVM format, labelling each sample with the first
/// original label of its class. Values use shortest round-trip decimals.
void writeLibsvm(std::ostream& out, const Dataset& ds);

struct PredictionRow {
  std::size_t sample_index = 0;
  std::string label;
  std::vector<double> scores;
};

/// Tab-separated predictions: a header naming the classes, then one
/// `index<TAB>label<TAB>score...` line per row.
void writePredictions(std::ostream& out, std::span<const std::string> class_names,
                      std::span<const PredictionRow> rows);

/// Shortest decimal that parses back to exactly `v`.
std::string formatDouble(double v);

}  // namespace bta
