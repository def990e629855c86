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

#include "bta/metrics.hpp"

#include <sstream>

#include "bta/errors.hpp"
#include "bta/libsvm.hpp"

namespace bta {

double fscore(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

EvalReport evaluate(const ConfusionMatrix& m, ClassId negative_class) {
  const std::size_t k = m.numClasses();
  if (k < 2) throw ArgumentError("evaluation needs at least two classes");
  if (negative_class >= k) throw ArgumentError("negative class out of range");
  EvalReport report;
  report.negative_class = negative_class;
  for (ClassId y = 0; y < k; ++y) {
    if (y == negative_class) continue;
    const auto tp = static_cast<double>(m.count(y, y));
    double predicted = 0.0;
    for (ClassId t = 0; t < k; ++t) predicted += static_cast<double>(m.count(t, y));
    const auto actual = static_cast<double>(m.rowTotal(y));
    ClassMetrics c;
    c.precision = predicted > 0 ? tp / predicted : 0.0;
    c.recall = actual > 0 ? tp / actual : 0.0;
    c.fscore = fscore(c.precision, c.recall);
    report.per_class[y] = c;
  }
  const double n = static_cast<double>(report.per_class.size());
  for (const auto& [y, c] : report.per_class) {
    report.macro.precision += c.precision;
    report.macro.recall += c.recall;
    report.macro.fscore += c.fscore;
  }
  report.macro.precision /= n;
  report.macro.recall /= n;
  report.macro.fscore /= n;
  return report;
}

std::string formatReportText(const EvalReport& report, const LabelDict& labels) {
  std::ostringstream out;
  for (const auto& [y, c] : report.per_class) {
    out << "class=" << y << " label=" << labels.name(y) << " precision=" << formatDouble(c.precision)
        << " recall=" << formatDouble(c.recall) << " fscore=" << formatDouble(c.fscore) << '\n';
  }
  out << "macro negative_class=" << report.negative_class
      << " precision=" << formatDouble(report.macro.precision)
      << " recall=" << formatDouble(report.macro.recall)
      << " fscore=" << formatDouble(report.macro.fscore) << '\n';
  return out.str();
}

}  // namespace bta
