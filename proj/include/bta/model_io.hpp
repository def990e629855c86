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

#include <filesystem>
#include <iosfwd>

#include "bta/forest.hpp"

namespace bta {

/// Current model file format version.
inline constexpr int kModelFormatVersion = 1;

/// Writes the versioned text model format. Output is a deterministic
/// function of the model; doubles are written as shortest round-trip decimals.
///
///   btaforest-model 1
///   [params] / [labels] K / [priors] / [tree t] nodes / [oob t] / [end]
///
/// Tree nodes are in preorder, one per line: `s feature threshold right label`
/// for splits and `l label` for leaves. OOB sections hold K rows of raw counts.
void saveModel(const ForestModel& model, std::ostream& out);

/// Parses and revalidates a model. Throws VersionError for an unknown
/// header and LoadError for anything malformed.
ForestModel loadModel(std::istream& in);

void saveModelFile(const ForestModel& model, const std::filesystem::path& path);
ForestModel loadModelFile(const std::filesystem::path& path);

}  // namespace bta
