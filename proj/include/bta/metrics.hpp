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

#include <map>
#include <string>

#include "bta/confusion.hpp"
#include "bta/dataset.hpp"

namespace bta {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double fscore = 0.0;
};

/// One-vs-all metrics for every class except the negative one, plus their
/// unweighted (macro) means.
struct EvalReport {
  std::map<ClassId, ClassMetrics> per_class;
  ClassMetrics macro;
  ClassId negative_class = 0;
};

/// Harmonic mean of p and r; 0 when both are 0.
double fscore(double precision, double recall);

/// Undefined ratios (zero denominators) count as 0.
EvalReport evaluate(const ConfusionMatrix& m, ClassId negative_class);

/// `class=<id> label=<name> precision=.. recall=.. fscore=..` per class and a
/// closing `macro ...` line.
std::string formatReportText(const EvalReport& report, const LabelDict& labels);

}  // namespace bta
