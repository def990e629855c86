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
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bta/confusion.hpp"
#include "bta/dataset.hpp"
#include "bta/forest.hpp"

namespace bta {

/// Conditionals below epsilon are raised to epsilon.
struct EpsilonFloor {
  double epsilon = 1e-5;
};

/// ((c + 1/K) / (N + 1))^b on raw counts.
struct KunchevaExponent {
  double b = 0.5;
};

using SmoothingConfig = std::variant<EpsilonFloor, KunchevaExponent>;

/// Throws ArgumentError unless epsilon > 0 (and < 1) or b > 0.
void validateSmoothing(const SmoothingConfig& cfg);

/// Plurality of `votes`; ties go to the lowest class id.
ClassId majorityVote(std::span<const ClassId> votes, std::size_t num_classes);

/// Smoothed estimate of P(tree predicts `predicted` | true class `truth`).
double smoothedConditional(const ConfusionMatrix& m, ClassId truth, ClassId predicted,
                           const SmoothingConfig& cfg);

struct DecisionScores {
  /// ln P(y) + sum_t ln P(vote_t | y), one per class.
  std::vector<double> log_scores;
  ClassId decision = 0;
};

/// Relative gap below which two log scores count as tied.
inline constexpr double kTieTolerance = 1e-12;

/// First index whose score is within kTieTolerance of the maximum.
ClassId argmaxLowest(std::span<const double> scores);

/// Bayesian tree aggregation in the log domain. votes[t] pairs with
/// matrices[t]; every matrix must be K x K with K = priors.probs.size().
DecisionScores btaDecide(std::span<const ClassId> votes, std::span<const ConfusionMatrix> matrices,
                         const ClassPriors& priors, const SmoothingConfig& cfg);

/// Precomputed ln-conditional tables for scoring many vote vectors against
/// one model. Produces the same sums as btaDecide, term for term.
class BtaScorer {
 public:
  BtaScorer(const ForestModel& model, const SmoothingConfig& cfg);
  DecisionScores score(std::span<const ClassId> votes) const;

 private:
  std::size_t k_;
  std::vector<double> log_priors_;
  // [tree][vote][class]
  std::vector<double> table_;
};

struct MajorityVoteStrategy {};
struct BayesianStrategy {
  SmoothingConfig smoothing;
};
using Strategy = std::variant<MajorityVoteStrategy, BayesianStrategy>;

struct ForestPrediction {
  ClassId decision = 0;
  std::optional<DecisionScores> scores;  // set for the Bayesian strategy
};

/// Each tree's prediction for `x`, in tree order.
std::vector<ClassId> collectVotes(const ForestModel& model, std::span<const FeatureEntry> x);

ForestPrediction predictForest(const ForestModel& model, std::span<const FeatureEntry> x,
                               const Strategy& strategy);

/// Votes for many samples, row-major [sample][tree].
class VoteTable {
 public:
  VoteTable(const ForestModel& model, std::span<const SampleVector> samples, std::size_t num_threads = 1);

  std::size_t numSamples() const { return samples_; }
  std::size_t numTrees() const { return trees_; }
  std::span<const ClassId> votes(std::size_t sample) const {
    return {votes_.data() + sample * trees_, trees_};
  }

 private:
  std::size_t samples_;
  std::size_t trees_;
  std::vector<ClassId> votes_;
};

/// Applies `strategy` to every row of `votes`.
std::vector<ForestPrediction> decideAll(const ForestModel& model, const VoteTable& votes,
                                        const Strategy& strategy, std::size_t num_threads = 1);

}  // namespace bta
