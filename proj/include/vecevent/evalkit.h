// Copyright 2026 The vecevent Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VECEVENT_EVALKIT_H_
#define VECEVENT_EVALKIT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "vecevent/corpus.h"
#include "vecevent/embed.h"
#include "vecevent/vecent.h"
#include "vecevent/vecom.h"

// Fold planning, binary metrics, micro-averaged curves and the
// cross-validation driver.
namespace vecevent::evalkit {

struct FoldOptions {
  int default_k = 10;
  int small_k = 5;
  // Fewer positive units than this switches to small_k folds.
  std::size_t small_threshold = 20;
};

struct FoldPlan {
  int k = 0;
  std::uint64_t seed = 0;
  // Sample index -> fold id in [0, k).
  std::vector<int> assignments;

  std::vector<std::size_t> TestIndices(int fold) const;
  std::vector<std::size_t> TrainIndices(int fold) const;
};

// Stratified k-fold over samples: positives and then negatives are shuffled
// and dealt round-robin, so every fold gets at least one positive. Throws
// kPlanning when there are fewer positives than folds.
FoldPlan PlanFolds(std::span<const int> labels, std::uint64_t seed,
                   const FoldOptions &options = {});

// Same over groups: samples sharing a group id land in one fold, and a group
// counts as positive when any of its samples is.
FoldPlan PlanGroupedFolds(std::span<const int> labels,
                          std::span<const std::size_t> groups,
                          std::uint64_t seed, const FoldOptions &options = {});

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  // Samples judged fully correct, and all samples. For plain binary labels
  // correct = tp + tn and total = tp + fp + fn + tn.
  std::size_t correct = 0;
  std::size_t total = 0;

  Confusion &operator+=(const Confusion &other);
};

struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  Confusion counts;
  std::size_t support = 0;  // gold positives
  // Set when the matching denominator was zero (the value is then 0).
  bool accuracy_undefined = false;
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f_undefined = false;
  double train_seconds = 0.0;
  double test_seconds = 0.0;
};

MetricsReport MetricsFromCounts(const Confusion &counts);

// Throws kShape on a length mismatch. Labels are 0/1.
MetricsReport BinaryMetrics(std::span<const int> gold,
                            std::span<const int> predicted);

struct ScoredLabel {
  double score = 0.0;
  int label = 0;
};

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
  // Scores >= threshold count as positive; +inf for the starting point.
  double threshold = 0.0;
};

struct CurveData {
  std::vector<CurvePoint> points;
  double auc = 0.0;
};

struct MicroCurves {
  CurveData roc;  // x = false positive rate, y = true positive rate
  CurveData prc;  // x = recall, y = precision
};

// Pools every (score, label) pair and sweeps the distinct scores from high to
// low. ROC runs from (0,0) to (1,1); PRC starts at (0,1) and ends at recall 1
// with precision equal to the positive prevalence. Areas use the trapezoid
// rule. Throws kData unless both classes are present.
MicroCurves ComputeMicroCurves(std::span<const ScoredLabel> pool);

double TrapezoidArea(const std::vector<CurvePoint> &points);

std::string CurveTsv(const CurveData &curve, const std::string &x_name,
                     const std::string &y_name);

struct CrossValConfig {
  vecent::ArgumentHyper argument;
  vecom::EventHyper event;
  double threshold = 0.5;
  std::uint64_t seed = 1;
  FoldOptions folds;
  // Keep whole documents in one fold instead of single samples.
  bool document_split = false;
  bool typed_candidates = false;
  bool argument_rows = true;
  bool event_rows = true;
  int jobs = 1;
};

struct ClassReport {
  std::string kind;  // "argument" or "event"
  std::string name;
  int k = 0;
  MetricsReport metrics;
};

struct SkippedClass {
  std::string kind;
  std::string name;
  std::string reason;
};

struct CrossValReport {
  std::string task;
  std::uint64_t seed = 0;
  std::vector<ClassReport> rows;
  std::vector<SkippedClass> skipped;
  std::vector<ScoredLabel> argument_pool;
  std::vector<ScoredLabel> event_pool;
  double total_seconds = 0.0;
};

// For each argument role and event type: plan folds, train on the training
// folds only (oversampling inside training), score the untouched test fold,
// and pool counts over folds. Event folds keep both orderings of an entity
// pair together; their argument models are retrained per fold without the
// entities of the test pairs. Event samples are ordered candidate pairs:
// a pair counts as a true positive when existence and direction are both
// right, and a wrongly oriented prediction counts as one false positive and
// one false negative.
CrossValReport CrossValidate(const corpus::Corpus &corpus,
                             const embed::EmbeddingTable &table,
                             const CrossValConfig &config);

// Deterministic artifacts (no timings).
nlohmann::ordered_json ReportJson(const CrossValReport &report);
std::string ReportCsv(const CrossValReport &report);
// Wall-clock sidecar.
nlohmann::ordered_json TimingJson(const CrossValReport &report);

}  // namespace vecevent::evalkit

#endif  // VECEVENT_EVALKIT_H_
