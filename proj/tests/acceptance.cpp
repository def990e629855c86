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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits 0 when
// every requested criterion passed, 1 on any failure, and 77 when a criterion
// needs benchmark files that are not present in --data-dir.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bta/aggregation.hpp"
#include "bta/bench.hpp"
#include "bta/errors.hpp"
#include "bta/forest.hpp"
#include "bta/libsvm.hpp"
#include "bta/metrics.hpp"
#include "bta/model_io.hpp"
#include "bta/parallel.hpp"

namespace fs = std::filesystem;
using namespace bta;

namespace {

constexpr int kSkipped = 77;

enum class Outcome { kPass, kFail, kSkip };

struct Verdict {
  Outcome outcome;
  std::string detail;
};

Verdict pass(std::string d) { return {Outcome::kPass, std::move(d)}; }
Verdict fail(std::string d) { return {Outcome::kFail, std::move(d)}; }
Verdict verdict(bool ok, std::string d) { return {ok ? Outcome::kPass : Outcome::kFail, std::move(d)}; }

std::string fmt(const char* format, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

// ---------------------------------------------------------------------------
// Synthetic criteria

Verdict oobFraction() {
  const auto start = std::chrono::steady_clock::now();
  double sum = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng(mixSeed(1, i));
    sum += static_cast<double>(bootstrapSample(10000, rng).oob.size()) / 10000.0;
  }
  const double mean = sum / 100.0;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return verdict(mean >= 0.358 && mean <= 0.378 && secs < 1.0,
                 fmt("mean OOB fraction %.4f (want [0.358, 0.378]) in %.3f s (want < 1 s)", mean, secs));
}

// Linear-domain P(y) * prod_t P(vote_t | y) in long double, from raw counts.
std::vector<long double> productForm(const std::vector<ClassId>& votes, const std::vector<ConfusionMatrix>& ms,
                                     const std::vector<double>& priors, const SmoothingConfig& cfg) {
  const std::size_t k = priors.size();
  std::vector<long double> out(k);
  for (std::size_t y = 0; y < k; ++y) {
    long double p = priors[y];
    for (std::size_t t = 0; t < votes.size(); ++t) {
      const long double c = ms[t].count(static_cast<ClassId>(y), votes[t]);
      const long double n = ms[t].rowTotal(static_cast<ClassId>(y));
      if (const auto* e = std::get_if<EpsilonFloor>(&cfg)) {
        const long double est = n > 0 ? c / n : 1.0L / k;
        p *= est < e->epsilon ? static_cast<long double>(e->epsilon) : est;
      } else {
        const long double b = std::get<KunchevaExponent>(cfg).b;
        p *= std::pow((c + 1.0L / k) / (n + 1.0L), b);
      }
    }
    out[y] = p;
  }
  return out;
}

Verdict oracleEquivalence() {
  std::mt19937_64 gen(20260101);
  int decision_mismatch = 0;
  long double worst = 0.0L;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 2 + gen() % 4;
    const std::size_t t = 1 + gen() % 10;
    std::vector<ConfusionMatrix> ms;
    std::vector<ClassId> votes;
    for (std::size_t i = 0; i < t; ++i) {
      std::vector<std::uint64_t> counts(k * k);
      for (auto& c : counts) c = gen() % 3 == 0 ? 0 : gen() % 60;
      ms.emplace_back(k, counts);
      votes.push_back(static_cast<ClassId>(gen() % k));
    }
    std::vector<double> priors(k);
    for (auto& p : priors) p = 1.0 + static_cast<double>(gen() % 1000);
    const double total = std::accumulate(priors.begin(), priors.end(), 0.0);
    for (auto& p : priors) p /= total;
    SmoothingConfig cfg;
    if (trial % 2 == 0) {
      cfg = EpsilonFloor{std::pow(10.0, -1.0 - static_cast<double>(gen() % 6))};
    } else {
      cfg = KunchevaExponent{0.1 + static_cast<double>(gen() % 20) / 10.0};
    }

    const auto got = btaDecide(votes, ms, ClassPriors{priors}, cfg);
    const auto want = productForm(votes, ms, priors, cfg);
    const long double best = *std::max_element(want.begin(), want.end());
    std::size_t want_decision = 0;
    while (want[want_decision] < best * (1.0L - 1e-12L)) ++want_decision;
    if (got.decision != want_decision) ++decision_mismatch;
    for (std::size_t y = 0; y < k; ++y) {
      const long double rel = std::fabs(std::exp(static_cast<long double>(got.log_scores[y])) / want[y] - 1.0L);
      worst = std::max(worst, rel);
    }
  }
  return verdict(decision_mismatch == 0 && worst <= 1e-9L,
                 fmt("1000 instances: %.0f decision mismatches, worst relative score error %.3g (want <= 1e-9)",
                     decision_mismatch, static_cast<double>(worst)));
}

Verdict reduction() {
  struct Matrix {
    std::uint64_t diag, off;
  };
  const std::vector<Matrix> shapes{{9, 1}, {6, 2}, {50, 0}, {3, 2}, {1, 0}};
  const std::vector<SmoothingConfig> smoothings{EpsilonFloor{1e-5}, KunchevaExponent{0.5}, KunchevaExponent{2.0}};
  std::size_t checked = 0, mismatches = 0;
  for (std::size_t k = 2; k <= 3; ++k) {
    const std::vector<double> uniform(k, 1.0 / static_cast<double>(k));
    for (const auto& shape : shapes) {
      std::vector<std::uint64_t> counts(k * k, shape.off);
      for (std::size_t i = 0; i < k; ++i) counts[i * k + i] = shape.diag;
      const ConfusionMatrix m(k, counts);
      for (const auto& cfg : smoothings) {
        for (std::size_t t = 1; t <= 8; ++t) {
          const std::vector<ConfusionMatrix> ms(t, m);
          std::vector<ClassId> votes(t, 0);
          while (true) {
            ++checked;
            if (btaDecide(votes, ms, ClassPriors{uniform}, cfg).decision != majorityVote(votes, k)) ++mismatches;
            std::size_t pos = 0;
            while (pos < t && ++votes[pos] == k) votes[pos++] = 0;
            if (pos == t) break;
          }
        }
      }
    }
  }
  return verdict(mismatches == 0, fmt("%.0f exhaustive vote vectors (T <= 8, K <= 3), %.0f disagreements",
                                      static_cast<double>(checked), static_cast<double>(mismatches)));
}

Verdict priorFade() {
  // Class 1 is the rare class; every tree votes 1 with likelihood ratio 0.6 / 0.4.
  const ConfusionMatrix m(2, {6, 4, 4, 6});
  const ClassPriors priors{{100.0 / 101.0, 1.0 / 101.0}};
  const auto expected = static_cast<std::size_t>(std::ceil(std::log(100.0) / std::log(1.5)));
  std::optional<std::size_t> first_flip;
  bool monotone = true;
  for (std::size_t t = 1; t <= 30; ++t) {
    const std::vector<ClassId> votes(t, 1);
    const std::vector<ConfusionMatrix> ms(t, m);
    const bool rare = btaDecide(votes, ms, priors, EpsilonFloor{1e-5}).decision == 1;
    if (rare && !first_flip) first_flip = t;
    if (!rare && first_flip) monotone = false;
  }
  const double flip = first_flip ? static_cast<double>(*first_flip) : -1.0;
  return verdict(first_flip == expected && expected == 12 && monotone,
                 fmt("unanimous votes flip the decision at T = %.0f (want %.0f)", flip,
                     static_cast<double>(expected)));
}

Verdict fscoreSpotCheck() {
  // TP / (TP + FP) = 0.941 and TP / (TP + FN) = 0.713 exactly.
  const std::uint64_t tp = 941 * 713, fp = 713000 - tp, fn = 941000 - tp;
  const ConfusionMatrix m(2, {1000000, fp, fn, tp});
  const auto r = evaluate(m, 0);
  const auto& c = r.per_class.at(1);
  return verdict(std::abs(c.precision - 0.941) < 1e-12 && std::abs(c.recall - 0.713) < 1e-12 &&
                     std::abs(c.fscore - 0.811) <= 0.001,
                 fmt("precision %.3f recall %.3f -> F %.4f (want 0.811 +- 0.001)", c.precision, c.recall, c.fscore));
}

Dataset blobs(const std::vector<std::size_t>& counts, std::uint32_t num_features, double spread, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, spread);
  std::uniform_real_distribution<double> center(-2.0, 2.0);
  std::vector<SampleVector> samples;
  std::vector<ClassId> labels;
  std::vector<std::vector<std::string>> groups;
  for (ClassId y = 0; y < counts.size(); ++y) {
    groups.push_back({std::to_string(y + 1)});
    std::vector<double> mu(num_features);
    for (auto& v : mu) v = center(gen);
    for (std::size_t i = 0; i < counts[y]; ++i) {
      SampleVector x;
      for (std::uint32_t f = 1; f <= num_features; ++f) {
        if (gen() % 5 != 0) x.push_back({f, mu[f - 1] + noise(gen)});
      }
      samples.push_back(std::move(x));
      labels.push_back(y);
    }
  }
  return Dataset(std::move(samples), std::move(labels), num_features, LabelDict(std::move(groups)));
}

std::string modelText(const ForestModel& model) {
  std::ostringstream out;
  saveModel(model, out);
  return out.str();
}

Verdict determinism() {
  const auto train = blobs({300, 90, 40, 20}, 12, 1.7, 91);
  const auto test = blobs({150, 45, 20, 10}, 12, 1.7, 92);
  ForestParams params;
  params.num_trees = 24;
  params.seed = 5;
  const auto reference = modelText(trainForest(train, params, 1));
  bool models_equal = true;
  for (std::size_t threads : {1, 2, 4, 8}) {
    for (int run = 0; run < 2; ++run) models_equal &= modelText(trainForest(train, params, threads)) == reference;
  }

  BenchConfig cfg;
  cfg.forest.num_trees = 12;
  cfg.repeats = 4;
  cfg.seed_base = 17;
  cfg.strategies = parseStrategyList("mv,bta-eps,bta-b");
  auto render = [&] {
    const auto result = runBench(train, test, cfg);
    return formatBenchTable(result) + benchToJson(result, train.labelDict()).dump();
  };
  const auto bench_ref = render();
  bool bench_equal = true;
  for (std::size_t threads : {1, 3, 8}) {
    for (bool parallel : {false, true}) {
      cfg.threads = threads;
      cfg.parallel_repeats = parallel;
      bench_equal &= render() == bench_ref;
    }
  }
  params.seed = 6;
  const bool seed_matters = modelText(trainForest(train, params, 1)) != reference;
  return verdict(models_equal && bench_equal && seed_matters,
                 std::string("model files ") + (models_equal ? "identical" : "DIFFER") +
                     " across runs and 1/2/4/8 threads; bench tables " + (bench_equal ? "identical" : "DIFFER") +
                     " across threads and parallel repeats");
}

Verdict roundTrip() {
  std::mt19937_64 gen(777);
  const std::vector<Strategy> strategies{MajorityVoteStrategy{}, BayesianStrategy{EpsilonFloor{1e-5}},
                                         BayesianStrategy{KunchevaExponent{0.5}}};
  std::size_t models = 0, compared = 0, differing = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t k = 2 + gen() % 5;
    const auto m = static_cast<std::uint32_t>(1 + gen() % 15);
    std::vector<std::size_t> counts(k);
    for (auto& c : counts) c = 5 + gen() % 40;
    const auto ds = blobs(counts, m, 0.5 + static_cast<double>(gen() % 20) / 10.0, gen());
    ForestParams params;
    params.num_trees = 1 + gen() % 15;
    params.seed = gen();
    params.tree.max_depth = gen() % 3 == 0 ? 1 + gen() % 4 : 0;
    const auto model = trainForest(ds, params);
    const auto text = modelText(model);
    std::istringstream in(text);
    const auto loaded = loadModel(in);
    ++models;
    if (!(loaded == model) || modelText(loaded) != text) ++differing;

    std::uniform_real_distribution<double> value(-6.0, 6.0);
    for (int i = 0; i < 100; ++i) {
      SampleVector x;
      for (std::uint32_t f = 1; f <= m + 2; ++f) {
        if (gen() % 3 != 0) x.push_back({f, value(gen)});
      }
      for (const auto& s : strategies) {
        const auto a = predictForest(model, x, s);
        const auto b = predictForest(loaded, x, s);
        ++compared;
        if (a.decision != b.decision || (a.scores && a.scores->log_scores != b.scores->log_scores)) ++differing;
      }
    }
  }
  return verdict(differing == 0, fmt("%.0f random models, %.0f predictions compared after reload, %.0f differ",
                                     static_cast<double>(models), static_cast<double>(compared),
                                     static_cast<double>(differing)));
}

// ---------------------------------------------------------------------------
// Benchmark-data criteria

struct Benchmark {
  std::string name;
  std::vector<std::string> train_files;  // first existing wins
  std::vector<std::string> test_files;
  std::size_t train_size;
  std::size_t original_classes;
  std::size_t merged_classes;
  double majority_prior;
  double mv_f, bta_f;
  bool ordered;  // BTA > MV is required
};

const std::vector<Benchmark>& benchmarks() {
  static const std::vector<Benchmark> table{
      {"usps", {"usps"}, {"usps.t"}, 7291, 10, 3, 0.84, 0.900, 0.897, false},
      {"dna", {"dna.scale.tr"}, {"dna.scale.t"}, 1400, 3, 3, 0.53, 0.920, 0.932, true},
      {"letter", {"letter.scale"}, {"letter.scale.t"}, 15000, 26, 7, 0.77, 0.950, 0.964, true},
      {"satimage", {"satimage.scale.tr"}, {"satimage.scale.t"}, 3104, 6, 3, 0.73, 0.876, 0.889, true},
      {"aloi", {"aloi.scale.tr"}, {"aloi.scale.t"}, 98000, 1000, 200, 0.80, 0.908, 0.961, true},
      {"mnist", {"mnist.scale", "mnist"}, {"mnist.scale.t", "mnist.t"}, 60000, 10, 3, 0.80, 0.935, 0.943, true},
  };
  return table;
}

std::optional<fs::path> findFile(const fs::path& dir, const std::vector<std::string>& names) {
  for (const auto& n : names) {
    for (const auto& candidate : {dir / n, dir / (n + ".gz")}) {
      if (fs::exists(candidate)) return candidate;
    }
  }
  return std::nullopt;
}

// aloi ships as one file. Split it once with a fixed seed into 98000 training
// and 10000 test rows, cached next to the source file.
void splitAloi(const fs::path& dir) {
  if (findFile(dir, {"aloi.scale.tr"}) && findFile(dir, {"aloi.scale.t"})) return;
  const auto whole = findFile(dir, {"aloi.scale"});
  if (!whole) return;
  std::cout << "splitting " << whole->string() << " into 98000 / 10000 rows\n";
  const auto ds = readLibsvmFile(*whole).dataset;
  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(mixSeed(0xa101, 0));
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  auto subset = [&](std::size_t from, std::size_t to) {
    std::vector<SampleVector> samples;
    std::vector<ClassId> labels;
    for (std::size_t i = from; i < std::min(to, order.size()); ++i) {
      samples.push_back(ds.sample(order[i]));
      labels.push_back(ds.label(order[i]));
    }
    return Dataset(std::move(samples), std::move(labels), ds.numFeatures(), ds.labelDict());
  };
  std::ofstream tr(dir / "aloi.scale.tr");
  writeLibsvm(tr, subset(0, 98000));
  std::ofstream te(dir / "aloi.scale.t");
  writeLibsvm(te, subset(98000, 108000));
}

struct BenchmarkPaths {
  fs::path train, test;
};

std::optional<BenchmarkPaths> locate(const Benchmark& b, const fs::path& dir) {
  if (b.name == "aloi") splitAloi(dir);
  auto train = findFile(dir, b.train_files);
  auto test = findFile(dir, b.test_files);
  if (!train || !test) return std::nullopt;
  return BenchmarkPaths{*train, *test};
}

Verdict tableTwo(const fs::path& dir) {
  std::size_t found = 0, failed = 0;
  std::ostringstream detail;
  for (const auto& b : benchmarks()) {
    auto paths = locate(b, dir);
    if (!paths) {
      detail << " " << b.name << "=missing";
      continue;
    }
    ++found;
    const auto raw = readLibsvmFile(paths->train).dataset;
    const auto merged = mergeBottomClasses(raw, b.merged_classes);
    const auto priors = classPriors(merged);
    const double prior = priors.probs[majorityClass(priors)];
    const bool ok = raw.size() == b.train_size && raw.numClasses() == b.original_classes &&
                    merged.numClasses() == b.merged_classes && std::abs(prior - b.majority_prior) <= 0.02;
    if (!ok) ++failed;
    detail << " " << b.name << "=" << raw.size() << "/" << raw.numClasses() << "->" << merged.numClasses() << "/"
           << fmt("%.1f%%", prior * 100.0) << (ok ? "" : "(MISMATCH)");
  }
  if (failed > 0) return fail("train size / classes / majority prior:" + detail.str());
  if (found < benchmarks().size()) {
    return {Outcome::kSkip, "benchmark files missing from " + dir.string() + ":" + detail.str()};
  }
  return pass("train size / classes / majority prior:" + detail.str());
}

struct TableThreeResult {
  Verdict band, direction;
};

std::optional<TableThreeResult> tableThree(const Benchmark& b, const fs::path& dir, std::size_t threads,
                                           std::size_t repeats) {
  auto paths = locate(b, dir);
  if (!paths) return std::nullopt;
  SplitOptions opts;
  opts.merge_classes = b.merged_classes;
  const auto splits = loadBenchmarkSplits(paths->train, paths->test, opts);
  BenchConfig cfg;
  cfg.forest.num_trees = 100;
  cfg.repeats = repeats;
  cfg.strategies = parseStrategyList("mv,bta-eps");
  cfg.threads = threads;
  cfg.negative_class = majorityClass(classPriors(splits.train));
  const auto start = std::chrono::steady_clock::now();
  const auto result = runBench(splits.train, splits.test, cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << b.name << " (" << splits.train.size() << " train, " << splits.test.size() << " test, "
            << fmt("%.0f s", secs) << ")\n"
            << formatBenchTable(result);

  const auto& mv = result.rows[0];
  const auto& bta = result.rows[1];
  const bool in_band = std::abs(mv.fscore.mean - b.mv_f) <= 0.02 && std::abs(bta.fscore.mean - b.bta_f) <= 0.02;
  const bool ordered = !b.ordered || bta.fscore.mean > mv.fscore.mean;
  std::string band = b.name + fmt(": F MV %.3f (target %.3f) BTA %.3f (target %.3f), band +-0.02", mv.fscore.mean,
                                  b.mv_f, bta.fscore.mean, b.bta_f);
  band += b.ordered ? (ordered ? ", BTA > MV holds" : ", BTA > MV VIOLATED") : ", ordering not required";
  const bool precision_ok = mv.precision.mean >= bta.precision.mean;
  const bool recall_ok = bta.recall.mean >= mv.recall.mean;
  return TableThreeResult{
      verdict(in_band && ordered, band),
      verdict(precision_ok && recall_ok,
              b.name + fmt(": precision MV %.3f >= BTA %.3f, recall BTA %.3f >= MV %.3f", mv.precision.mean,
                           bta.precision.mean, bta.recall.mean, mv.recall.mean)),
  };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"btaforest acceptance checks"};
  std::vector<int> criteria{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<std::string> datasets;
  fs::path data_dir = "data";
  std::size_t threads = 0;
  std::size_t repeats = 10;
  app.add_option("--criteria", criteria, "Criteria to run")->delimiter(',')->check(CLI::Range(1, 10));
  app.add_option("--dataset", datasets, "Benchmarks for criteria 1-2 (default: all)")->delimiter(',');
  app.add_option("--data-dir", data_dir, "Directory holding the LibSVM benchmark files");
  app.add_option("--threads", threads, "Worker threads for benchmark runs (0 = all cores)");
  app.add_option("--repeats", repeats, "Repeats per benchmark")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  bool any_fail = false, any_skip = false;
  auto report = [&](int id, const Verdict& v) {
    const char* tag = v.outcome == Outcome::kPass ? "PASS" : v.outcome == Outcome::kFail ? "FAIL" : "SKIP";
    std::cout << tag << " criterion " << id << ": " << v.detail << std::endl;
    any_fail |= v.outcome == Outcome::kFail;
    any_skip |= v.outcome == Outcome::kSkip;
  };
  auto guarded = [&](int id, const std::function<Verdict()>& fn) {
    try {
      report(id, fn());
    } catch (const std::exception& e) {
      report(id, fail(std::string("error: ") + e.what()));
    }
  };

  const std::set<int> wanted(criteria.begin(), criteria.end());
  if (wanted.count(1) || wanted.count(2)) {
    std::vector<const Benchmark*> selected;
    for (const auto& b : benchmarks()) {
      if (datasets.empty() || std::find(datasets.begin(), datasets.end(), b.name) != datasets.end()) {
        selected.push_back(&b);
      }
    }
    if (selected.empty()) {
      std::cerr << "no known dataset selected\n";
      return 2;
    }
    for (const auto* b : selected) {
      std::optional<TableThreeResult> r;
      try {
        r = tableThree(*b, data_dir, resolveThreads(threads), repeats);
      } catch (const std::exception& e) {
        r = TableThreeResult{fail(b->name + ": error: " + e.what()), fail(b->name + ": error: " + e.what())};
      }
      if (!r) {
        const Verdict skip{Outcome::kSkip, b->name + ": benchmark files not found in " + data_dir.string()};
        if (wanted.count(1)) report(1, skip);
        if (wanted.count(2)) report(2, skip);
        continue;
      }
      if (wanted.count(1)) report(1, r->band);
      if (wanted.count(2)) report(2, r->direction);
    }
  }
  if (wanted.count(3)) guarded(3, [&] { return tableTwo(data_dir); });
  if (wanted.count(4)) guarded(4, oobFraction);
  if (wanted.count(5)) guarded(5, oracleEquivalence);
  if (wanted.count(6)) guarded(6, reduction);
  if (wanted.count(7)) guarded(7, priorFade);
  if (wanted.count(8)) guarded(8, fscoreSpotCheck);
  if (wanted.count(9)) guarded(9, determinism);
  if (wanted.count(10)) guarded(10, roundTrip);

  if (any_fail) return 1;
  return any_skip ? kSkipped : 0;
}
