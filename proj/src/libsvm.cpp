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

#include "bta/libsvm.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "bta/errors.hpp"

namespace bta {
namespace {

bool isSpace(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; }

// Splits on runs of blanks.
std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && isSpace(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !isSpace(line[i])) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw FormatError("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::string formatDouble(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

ParsedDataset parseLibsvm(std::istream& in, const ParseOptions& options) {
  ParseDiagnostics diag;
  std::vector<SampleVector> samples;
  std::vector<std::string> raw_labels;
  std::string line;
  while ((!options.max_samples || samples.size() < *options.max_samples) && std::getline(in, line)) {
    ++diag.line_count;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    auto tokens = tokenize(view);
    if (tokens.empty()) {
      ++diag.skipped_blank_lines;
      continue;
    }
    if (tokens.front().find(':') != std::string_view::npos) fail(diag.line_count, "label missing");
    try {
      parseNumericLabel(tokens.front());
    } catch (const FormatError& e) {
      fail(diag.line_count, e.what());
    }
    SampleVector sample;
    sample.reserve(tokens.size() - 1);
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto tok = tokens[t];
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        fail(diag.line_count, "expected <index>:<value>, got '" + std::string(tok) + "'");
      }
      std::int64_t index = 0;
      auto [iend, iec] = std::from_chars(tok.data(), tok.data() + colon, index);
      if (colon == 0 || iec != std::errc() || iend != tok.data() + colon) {
        fail(diag.line_count, "unparsable feature index in '" + std::string(tok) + "'");
      }
      if (index < 1) fail(diag.line_count, "feature index " + std::to_string(index) + " < 1");
      if (index > static_cast<std::int64_t>(UINT32_MAX)) {
        fail(diag.line_count, "feature index " + std::to_string(index) + " too large");
      }
      double value = 0.0;
      const char* vbegin = tok.data() + colon + 1;
      const char* vend = tok.data() + tok.size();
      if (vbegin != vend && *vbegin == '+') ++vbegin;
      auto [vptr, vec] = std::from_chars(vbegin, vend, value);
      if (vbegin == vend || vec != std::errc() || vptr != vend || !std::isfinite(value)) {
        fail(diag.line_count, "unparsable feature value in '" + std::string(tok) + "'");
      }
      const auto idx = static_cast<std::uint32_t>(index);
      if (!sample.empty() && idx <= sample.back().index) {
        fail(diag.line_count, idx == sample.back().index
                                  ? "duplicate feature index " + std::to_string(idx)
                                  : "feature indices not ascending at " + std::to_string(idx));
      }
      sample.push_back({idx, value});
      diag.max_feature_index = std::max(diag.max_feature_index, idx);
    }
    raw_labels.emplace_back(tokens.front());
    samples.push_back(std::move(sample));
  }
  if (samples.empty()) throw FormatError("no samples found");

  LabelDict dict = buildLabelDict(raw_labels);
  std::vector<ClassId> labels;
  labels.reserve(raw_labels.size());
  for (const auto& raw : raw_labels) labels.push_back(*dict.find(raw));
  std::uint32_t m = std::max<std::uint32_t>(diag.max_feature_index, 1);
  if (options.expected_num_features) m = std::max(m, *options.expected_num_features);
  return {Dataset(std::move(samples), std::move(labels), m, std::move(dict)), diag};
}

std::string readTextFile(const std::filesystem::path& path) {
  const std::string name = path.string();
  if (path.extension() == ".gz") {
    gzFile gz = gzopen(name.c_str(), "rb");
    if (gz == nullptr) throw IoError("cannot open " + name);
    std::string text;
    char buf[1 << 16];
    int n = 0;
    while ((n = gzread(gz, buf, sizeof(buf))) > 0) text.append(buf, static_cast<std::size_t>(n));
    int err = 0;
    const char* msg = gzerror(gz, &err);
    const bool failed = n < 0 || (err != Z_OK && err != Z_STREAM_END);
    const std::string reason = failed ? msg : "";
    gzclose(gz);
    if (failed) throw IoError("cannot decompress " + name + ": " + reason);
    return text;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + name);
  return ss.str();
}

ParsedDataset readLibsvmFile(const std::filesystem::path& path, const ParseOptions& options) {
  std::istringstream in(readTextFile(path));
  try {
    return parseLibsvm(in, options);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void writeLibsvm(std::ostream& out, const Dataset& ds) {
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out << ds.labelDict().members(ds.label(i)).front();
    for (const auto& e : ds.sample(i)) out << ' ' << e.index << ':' << formatDouble(e.value);
    out << '\n';
  }
  if (!out) throw IoError("failed writing LibSVM data");
}

void writePredictions(std::ostream& out, std::span<const std::string> class_names,
                      std::span<const PredictionRow> rows) {
  out << "index\tlabel";
  for (const auto& name : class_names) out << '\t' << name;
  out << '\n';
  for (const auto& row : rows) {
    if (row.scores.size() != class_names.size()) {
      throw ArgumentError("prediction row " + std::to_string(row.sample_index) + " has " +
                          std::to_string(row.scores.size()) + " scores for " +
                          std::to_string(class_names.size()) + " classes");
    }
    out << row.sample_index << '\t' << row.label;
    for (double s : row.scores) out << '\t' << formatDouble(s);
    out << '\n';
  }
  out.flush();
  if (!out) throw IoError("failed writing predictions");
}

}  // namespace bta
