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

#include "bta/model_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bta/errors.hpp"
#include "bta/libsvm.hpp"

namespace bta {
namespace {

constexpr std::string_view kMagic = "btaforest-model";

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Tokens of the next line; throws naming `section` at end of input.
  std::vector<std::string> next(std::string_view section) {
    std::string line;
    if (!std::getline(in_, line)) {
      throw LoadError("model file truncated: missing " + std::string(section));
    }
    ++line_no_;
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    for (std::string tok; ss >> tok;) tokens.push_back(std::move(tok));
    return tokens;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw LoadError("model line " + std::to_string(line_no_) + ": " + what);
  }

  template <typename Int>
  Int integer(const std::string& tok) const {
    if (!tok.empty() && tok.front() == '-') fail("negative value '" + tok + "' violates a count invariant");
    Int v{};
    auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || end != tok.data() + tok.size()) fail("bad integer '" + tok + "'");
    return v;
  }

  double real(const std::string& tok) const {
    double v = 0.0;
    auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || end != tok.data() + tok.size()) fail("bad number '" + tok + "'");
    return v;
  }

  // Reads `key value` and returns the value token.
  std::string keyed(std::string_view key, std::string_view section) {
    auto tokens = next(section);
    if (tokens.size() != 2 || tokens[0] != key) fail("expected '" + std::string(key) + " <value>'");
    return tokens[1];
  }

  // Reads a `[name] args...` header, returning args.
  std::vector<std::string> header(const std::string& name) {
    auto tokens = next("section " + name);
    if (tokens.empty() || tokens[0] != name) fail("expected section " + name);
    tokens.erase(tokens.begin());
    return tokens;
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

void saveModel(const ForestModel& model, std::ostream& out) {
  const std::size_t k = model.numClasses();
  out << kMagic << ' ' << kModelFormatVersion << '\n';
  out << "[params]\n";
  out << "num_trees " << model.params.num_trees << '\n';
  out << "min_samples_split " << model.params.tree.min_samples_split << '\n';
  out << "features_per_node " << model.params.tree.features_per_node << '\n';
  out << "max_depth " << model.params.tree.max_depth << '\n';
  out << "seed " << model.params.seed << '\n';
  out << "num_features " << model.num_features << '\n';
  out << "[labels] " << k << '\n';
  for (ClassId y = 0; y < k; ++y) {
    const auto& members = model.labels.members(y);
    out << members.size();
    for (const auto& m : members) out << ' ' << m;
    out << '\n';
  }
  out << "[priors]\n";
  for (ClassId y = 0; y < k; ++y) out << (y ? " " : "") << formatDouble(model.priors.probs[y]);
  out << '\n';
  for (std::size_t t = 0; t < model.numTrees(); ++t) {
    const auto& nodes = model.trees[t].nodes();
    out << "[tree] " << t << ' ' << nodes.size() << '\n';
    for (const auto& n : nodes) {
      if (n.isLeaf()) {
        out << "l " << n.label << '\n';
      } else {
        out << "s " << n.feature << ' ' << formatDouble(n.threshold) << ' ' << n.right << ' ' << n.label << '\n';
      }
    }
    out << "[oob] " << t << '\n';
    const auto& m = model.oob_matrices[t];
    for (ClassId y = 0; y < k; ++y) {
      for (ClassId l = 0; l < k; ++l) out << (l ? " " : "") << m.count(y, l);
      out << '\n';
    }
  }
  out << "[end]\n";
  out.flush();
  if (!out) throw IoError("failed writing model");
}

ForestModel loadModel(std::istream& in) {
  LineReader r(in);
  {
    auto tokens = r.next("format header");
    if (tokens.size() != 2 || tokens[0] != kMagic) throw VersionError("not a btaforest model file");
    if (tokens[1] != std::to_string(kModelFormatVersion)) {
      throw VersionError("unsupported model format version '" + tokens[1] + "'");
    }
  }
  ForestModel model;
  r.header("[params]");
  model.params.num_trees = r.integer<std::size_t>(r.keyed("num_trees", "[params]"));
  model.params.tree.min_samples_split = r.integer<std::size_t>(r.keyed("min_samples_split", "[params]"));
  model.params.tree.features_per_node = r.integer<std::size_t>(r.keyed("features_per_node", "[params]"));
  model.params.tree.max_depth = r.integer<std::size_t>(r.keyed("max_depth", "[params]"));
  model.params.seed = r.integer<std::uint64_t>(r.keyed("seed", "[params]"));
  model.num_features = r.integer<std::uint32_t>(r.keyed("num_features", "[params]"));

  auto label_args = r.header("[labels]");
  if (label_args.size() != 1) r.fail("[labels] needs a class count");
  const auto k = r.integer<std::size_t>(label_args[0]);
  std::vector<std::vector<std::string>> groups(k);
  for (auto& group : groups) {
    auto tokens = r.next("section [labels]");
    if (tokens.empty() || r.integer<std::size_t>(tokens[0]) != tokens.size() - 1 || tokens.size() < 2) {
      r.fail("malformed label group");
    }
    group.assign(tokens.begin() + 1, tokens.end());
  }
  try {
    model.labels = LabelDict(std::move(groups));
  } catch (const ArgumentError& e) {
    r.fail(e.what());
  }

  r.header("[priors]");
  {
    auto tokens = r.next("section [priors]");
    if (tokens.size() != k) r.fail("expected " + std::to_string(k) + " priors");
    for (const auto& tok : tokens) model.priors.probs.push_back(r.real(tok));
  }

  for (std::size_t t = 0; t < model.params.num_trees; ++t) {
    auto args = r.header("[tree]");
    if (args.size() != 2 || r.integer<std::size_t>(args[0]) != t) r.fail("expected [tree] " + std::to_string(t));
    const auto count = r.integer<std::size_t>(args[1]);
    std::vector<TreeNode> nodes;
    nodes.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      auto tokens = r.next("nodes of tree " + std::to_string(t));
      TreeNode n;
      if (tokens.size() == 2 && tokens[0] == "l") {
        n.label = r.integer<ClassId>(tokens[1]);
      } else if (tokens.size() == 5 && tokens[0] == "s") {
        n.feature = r.integer<std::uint32_t>(tokens[1]);
        if (n.feature == 0) r.fail("split on feature 0");
        n.threshold = r.real(tokens[2]);
        n.right = r.integer<std::uint32_t>(tokens[3]);
        n.label = r.integer<ClassId>(tokens[4]);
      } else {
        r.fail("malformed tree node");
      }
      nodes.push_back(n);
    }
    try {
      model.trees.emplace_back(std::move(nodes));
    } catch (const ArgumentError& e) {
      r.fail(std::string("tree ") + std::to_string(t) + ": " + e.what());
    }

    args = r.header("[oob]");
    if (args.size() != 1 || r.integer<std::size_t>(args[0]) != t) r.fail("expected [oob] " + std::to_string(t));
    std::vector<std::uint64_t> counts;
    counts.reserve(k * k);
    for (std::size_t y = 0; y < k; ++y) {
      auto tokens = r.next("OOB matrix of tree " + std::to_string(t));
      if (tokens.size() != k) r.fail("OOB row needs " + std::to_string(k) + " counts");
      for (const auto& tok : tokens) counts.push_back(r.integer<std::uint64_t>(tok));
    }
    model.oob_matrices.emplace_back(k, std::move(counts));
  }
  r.header("[end]");

  try {
    model.validate();
  } catch (const ArgumentError& e) {
    throw LoadError(std::string("invalid model: ") + e.what());
  }
  return model;
}

void saveModelFile(const ForestModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  saveModel(model, out);
}

ForestModel loadModelFile(const std::filesystem::path& path) {
  std::istringstream in(readTextFile(path));
  return loadModel(in);
}

}  // namespace bta
