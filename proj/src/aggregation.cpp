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

#include "bta/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bta/errors.hpp"
#include "bta/parallel.hpp"

namespace bta {

void validateSmoothing(const SmoothingConfig& cfg) {
  if (const auto* eps = std::get_if<EpsilonFloor>(&cfg)) {
    if (!(eps->epsilon > 0.0 && eps->epsilon < 1.0)) throw ArgumentError("epsilon must lie in (0, 1)");
  } else if (!(std::get<KunchevaExponent>(cfg).b > 0.0) || !std::isfinite(std::get<KunchevaExponent>(cfg).b)) {
    throw ArgumentError("Kuncheva exponent B must be positive");
  }
}

ClassId majorityVote(std::span<const ClassId> votes, std::size_t num_classes) {
  if (votes.empty()) throw ArgumentError("majority vote over zero trees");
  std::vector<std::size_t> tally(num_classes, 0);
  for (ClassId v : votes) {
    if (v >= num_classes) throw ArgumentError("vote " + std::to_string(v) + " out of range");
    ++tally[v];
  }
  return static_cast<ClassId>(std::max_element(tally.begin(), tally.end()) - tally.begin());
}

double smoothedConditional(const ConfusionMatrix& m, ClassId truth, ClassId predicted,
                           const SmoothingConfig& cfg) {
  const auto k = static_cast<double>(m.numClasses());
  const auto count = static_cast<double>(m.count(truth, predicted));
  const auto total = static_cast<double>(m.rowTotal(truth));
  if (const auto* eps = std::get_if<EpsilonFloor>(&cfg)) {
    const double p = total > 0 ? count / total : 1.0 / k;
    return std::max(p, eps->epsilon);
  }
  const double b = std::get<KunchevaExponent>(cfg).b;
  return std::pow((count + 1.0 / k) / (total + 1.0), b);
}

ClassId argmaxLowest(std::span<const double> scores) {
  const double best = *std::max_element(scores.begin(), scores.end());
  // Equal sums accumulated in a different order can disagree in the last bits.
  const double slack = kTieTolerance * std::max(1.0, std::abs(best));
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] >= best - slack) return static_cast<ClassId>(i);
  }
  return 0;
}

DecisionScores btaDecide(std::span<const ClassId> votes, std::span<const ConfusionMatrix> matrices,
                         const ClassPriors& priors, const SmoothingConfig& cfg) {
  if (votes.size() != matrices.size()) {
    throw ArgumentError("got " + std::to_string(votes.size()) + " votes for " +
                        std::to_string(matrices.size()) + " matrices");
  }
  validateSmoothing(cfg);
  const std::size_t k = priors.probs.size();
  DecisionScores out;
  out.log_scores.resize(k);
  for (ClassId y = 0; y < k; ++y) out.log_scores[y] = std::log(priors.probs[y]);
  for (std::size_t t = 0; t < votes.size(); ++t) {
    if (matrices[t].numClasses() != k) throw ArgumentError("matrix size differs from prior length");
    if (votes[t] >= k) throw ArgumentError("vote " + std::to_string(votes[t]) + " out of range");
    for (ClassId y = 0; y < k; ++y) {
      out.log_scores[y] += std::log(smoothedConditional(matrices[t], y, votes[t], cfg));
    }
  }
  out.decision = argmaxLowest(out.log_scores);
  return out;
}

BtaScorer::BtaScorer(const ForestModel& model, const SmoothingConfig& cfg) : k_(model.numClasses()) {
  validateSmoothing(cfg);
  log_priors_.resize(k_);
  for (ClassId y = 0; y < k_; ++y) log_priors_[y] = std::log(model.priors.probs[y]);
  table_.resize(model.numTrees() * k_ * k_);
  for (std::size_t t = 0; t < model.numTrees(); ++t) {
    for (ClassId vote = 0; vote < k_; ++vote) {
      double* row = table_.data() + (t * k_ + vote) * k_;
      for (ClassId y = 0; y < k_; ++y) row[y] = std::log(smoothedConditional(model.oob_matrices[t], y, vote, cfg));
    }
  }
}

DecisionScores BtaScorer::score(std::span<const ClassId> votes) const {
  DecisionScores out;
  out.log_scores = log_priors_;
  for (std::size_t t = 0; t < votes.size(); ++t) {
    const double* row = table_.data() + (t * k_ + votes[t]) * k_;
    for (ClassId y = 0; y < k_; ++y) out.log_scores[y] += row[y];
  }
  out.decision = argmaxLowest(out.log_scores);
  return out;
}

std::vector<ClassId> collectVotes(const ForestModel& model, std::span<const FeatureEntry> x) {
  std::vector<ClassId> votes;
  votes.reserve(model.numTrees());
  for (const auto& tree : model.trees) votes.push_back(tree.predict(x));
  return votes;
}

ForestPrediction predictForest(const ForestModel& model, std::span<const FeatureEntry> x,
                               const Strategy& strategy) {
  const auto votes = collectVotes(model, x);
  if (std::holds_alternative<MajorityVoteStrategy>(strategy)) {
    return {majorityVote(votes, model.numClasses()), std::nullopt};
  }
  auto scores = btaDecide(votes, model.oob_matrices, model.priors, std::get<BayesianStrategy>(strategy).smoothing);
  const ClassId decision = scores.decision;
  return {decision, std::move(scores)};
}

VoteTable::VoteTable(const ForestModel& model, std::span<const SampleVector> samples, std::size_t num_threads)
    : samples_(samples.size()), trees_(model.numTrees()), votes_(samples_ * trees_) {
  parallelFor(samples_, resolveThreads(num_threads), [&](std::size_t i) {
    for (std::size_t t = 0; t < trees_; ++t) votes_[i * trees_ + t] = model.trees[t].predict(samples[i]);
  });
}

std::vector<ForestPrediction> decideAll(const ForestModel& model, const VoteTable& votes,
                                        const Strategy& strategy, std::size_t num_threads) {
  std::vector<ForestPrediction> out(votes.numSamples());
  if (std::holds_alternative<MajorityVoteStrategy>(strategy)) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i].decision = majorityVote(votes.votes(i), model.numClasses());
    return out;
  }
  const BtaScorer scorer(model, std::get<BayesianStrategy>(strategy).smoothing);
  parallelFor(out.size(), resolveThreads(num_threads), [&](std::size_t i) {
    auto scores = scorer.score(votes.votes(i));
    out[i].decision = scores.decision;
    out[i].scores = std::move(scores);
  });
  return out;
}

}  // namespace bta
