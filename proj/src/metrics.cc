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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "fmt/format.h"
#include "vecevent/error.h"
#include "vecevent/evalkit.h"
#include "vecevent/random.h"

namespace vecevent::evalkit {
namespace {

double Ratio(std::size_t num, std::size_t den, bool &undefined) {
  undefined = den == 0;
  return undefined ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::vector<std::size_t> FoldPlan::TestIndices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::TrainIndices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] != fold) out.push_back(i);
  }
  return out;
}

FoldPlan PlanGroupedFolds(std::span<const int> labels,
                          std::span<const std::size_t> groups,
                          std::uint64_t seed, const FoldOptions &options) {
  if (labels.size() != groups.size()) {
    throw Error(ErrorKind::kShape, "fold planning: labels and groups differ");
  }
  if (options.small_k < 2 || options.default_k < 2) {
    throw Error(ErrorKind::kConfig, "fold counts must be >= 2");
  }
  std::unordered_map<std::size_t, std::size_t> dense;
  std::vector<int> unit_label;
  std::vector<std::size_t> unit_of(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = dense.emplace(groups[i], unit_label.size());
    if (inserted) unit_label.push_back(0);
    unit_of[i] = it->second;
    if (labels[i] == 1) unit_label[it->second] = 1;
  }
  std::vector<std::size_t> pos, neg;
  for (std::size_t u = 0; u < unit_label.size(); ++u) {
    (unit_label[u] ? pos : neg).push_back(u);
  }
  FoldPlan plan;
  plan.seed = seed;
  plan.k = pos.size() < options.small_threshold ? options.small_k
                                                 : options.default_k;
  if (pos.size() < static_cast<std::size_t>(plan.k)) {
    throw Error(ErrorKind::kPlanning,
                fmt::format("{} positive units cannot fill {} folds",
                            pos.size(), plan.k));
  }
  Rng rng(Mix64(seed));
  rng.Shuffle(pos);
  rng.Shuffle(neg);
  std::vector<int> unit_fold(unit_label.size());
  const auto k = static_cast<std::size_t>(plan.k);
  for (std::size_t i = 0; i < pos.size(); ++i) {
    unit_fold[pos[i]] = static_cast<int>(i % k);
  }
  for (std::size_t j = 0; j < neg.size(); ++j) {
    unit_fold[neg[j]] = static_cast<int>((pos.size() + j) % k);
  }
  plan.assignments.resize(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    plan.assignments[i] = unit_fold[unit_of[i]];
  }
  return plan;
}

FoldPlan PlanFolds(std::span<const int> labels, std::uint64_t seed,
                   const FoldOptions &options) {
  std::vector<std::size_t> groups(labels.size());
  std::iota(groups.begin(), groups.end(), std::size_t{0});
  return PlanGroupedFolds(labels, groups, seed, options);
}

Confusion &Confusion::operator+=(const Confusion &other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  tn += other.tn;
  correct += other.correct;
  total += other.total;
  return *this;
}

MetricsReport MetricsFromCounts(const Confusion &counts) {
  MetricsReport r;
  r.counts = counts;
  r.support = counts.tp + counts.fn;
  r.accuracy = Ratio(counts.correct, counts.total, r.accuracy_undefined);
  r.precision = Ratio(counts.tp, counts.tp + counts.fp, r.precision_undefined);
  r.recall = Ratio(counts.tp, counts.tp + counts.fn, r.recall_undefined);
  const double pr = r.precision + r.recall;
  r.f_undefined = pr == 0.0;
  r.f_score = r.f_undefined ? 0.0 : 2.0 * r.precision * r.recall / pr;
  return r;
}

MetricsReport BinaryMetrics(std::span<const int> gold,
                            std::span<const int> predicted) {
  if (gold.size() != predicted.size()) {
    throw Error(ErrorKind::kShape,
                fmt::format("metrics: {} gold labels vs {} predictions",
                            gold.size(), predicted.size()));
  }
  Confusion c;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool g = gold[i] == 1, p = predicted[i] == 1;
    if (g && p) ++c.tp;
    else if (p) ++c.fp;
    else if (g) ++c.fn;
    else ++c.tn;
  }
  c.correct = c.tp + c.tn;
  c.total = gold.size();
  return MetricsFromCounts(c);
}

double TrapezoidArea(const std::vector<CurvePoint> &points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].x - points[i - 1].x) *
            (points[i].y + points[i - 1].y) / 2.0;
  }
  return area;
}

MicroCurves ComputeMicroCurves(std::span<const ScoredLabel> pool) {
  std::size_t positives = 0;
  for (const ScoredLabel &s : pool) {
    if (std::isnan(s.score)) throw Error(ErrorKind::kData, "NaN score");
    positives += s.label == 1;
  }
  const std::size_t negatives = pool.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorKind::kData,
                fmt::format("curves need both classes ({} positive, {} "
                            "negative)",
                            positives, negatives));
  }
  std::vector<ScoredLabel> sorted(pool.begin(), pool.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredLabel &a, const ScoredLabel &b) {
              return a.score > b.score;
            });
  const double inf = std::numeric_limits<double>::infinity();
  const auto P = static_cast<double>(positives);
  const auto N = static_cast<double>(negatives);
  MicroCurves out;
  out.roc.points.push_back({0.0, 0.0, inf});
  out.prc.points.push_back({0.0, 1.0, inf});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    const double threshold = sorted[i].score;
    for (; i < sorted.size() && sorted[i].score == threshold; ++i) {
      (sorted[i].label == 1 ? tp : fp) += 1;
    }
    out.roc.points.push_back({static_cast<double>(fp) / N,
                              static_cast<double>(tp) / P, threshold});
    out.prc.points.push_back({static_cast<double>(tp) / P,
                              static_cast<double>(tp) /
                                  static_cast<double>(tp + fp),
                              threshold});
  }
  out.roc.auc = TrapezoidArea(out.roc.points);
  out.prc.auc = TrapezoidArea(out.prc.points);
  return out;
}

std::string CurveTsv(const CurveData &curve, const std::string &x_name,
                     const std::string &y_name) {
  std::string out = fmt::format("{}\t{}\tthreshold\n", x_name, y_name);
  for (const CurvePoint &p : curve.points) {
    out += fmt::format("{:.17g}\t{:.17g}\t{:.17g}\n", p.x, p.y, p.threshold);
  }
  return out;
}

}  // namespace vecevent::evalkit
