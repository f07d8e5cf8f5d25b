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

#include <cmath>
#include <limits>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "oracles.h"
#include "vecevent/error.h"
#include "vecevent/evalkit.h"
#include "vecevent/synth.h"

namespace vecevent::evalkit {
namespace {

std::vector<int> RandomLabels(std::size_t n, double p, Rng &rng) {
  std::vector<int> out(n);
  for (int &v : out) v = rng.Uniform() < p;
  return out;
}

TEST(PlanFoldsTest, StratifiedRoundRobin) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 30 + rng.Below(300);
    auto labels = RandomLabels(n, rng.Uniform(0.1, 0.6), rng);
    std::size_t pos = std::count(labels.begin(), labels.end(), 1);
    if (pos < 5) continue;
    auto plan = PlanFolds(labels, trial);
    EXPECT_EQ(plan.k, pos < 20 ? 5 : 10);
    ASSERT_EQ(plan.assignments.size(), n);
    std::vector<std::size_t> fold_pos(plan.k), fold_all(plan.k);
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_GE(plan.assignments[i], 0);
      ASSERT_LT(plan.assignments[i], plan.k);
      fold_pos[plan.assignments[i]] += labels[i];
      fold_all[plan.assignments[i]] += 1;
    }
    auto [pmin, pmax] = std::minmax_element(fold_pos.begin(), fold_pos.end());
    auto [amin, amax] = std::minmax_element(fold_all.begin(), fold_all.end());
    EXPECT_GE(*pmin, 1u);
    EXPECT_LE(*pmax - *pmin, 1u);
    EXPECT_LE(*amax - *amin, 1u);
    for (int f = 0; f < plan.k; ++f) {
      auto test = plan.TestIndices(f), train = plan.TrainIndices(f);
      EXPECT_EQ(test.size() + train.size(), n);
      std::set<std::size_t> seen(test.begin(), test.end());
      for (std::size_t i : train) EXPECT_EQ(seen.count(i), 0u);
    }
  }
}

TEST(PlanFoldsTest, DeterministicPerSeed) {
  Rng rng(2);
  auto labels = RandomLabels(200, 0.3, rng);
  EXPECT_EQ(PlanFolds(labels, 5).assignments, PlanFolds(labels, 5).assignments);
  EXPECT_NE(PlanFolds(labels, 5).assignments, PlanFolds(labels, 6).assignments);
}

TEST(PlanFoldsTest, TooFewPositivesIsPlanningError) {
  std::vector<int> labels(50, 0);
  labels[0] = labels[1] = labels[2] = 1;
  try {
    PlanFolds(labels, 1);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPlanning);
  }
  FoldOptions small{10, 3, 20};
  EXPECT_EQ(PlanFolds(labels, 1, small).k, 3);
}

TEST(PlanGroupedFoldsTest, GroupsStayTogether) {
  Rng rng(3);
  std::vector<int> labels;
  std::vector<std::size_t> groups;
  for (std::size_t g = 0; g < 80; ++g) {
    const int pos = rng.Uniform() < 0.4;
    const std::size_t size = 1 + rng.Below(3);
    for (std::size_t j = 0; j < size; ++j) {
      labels.push_back(pos && j == 0);
      groups.push_back(g);
    }
  }
  auto plan = PlanGroupedFolds(labels, groups, 9);
  std::map<std::size_t, int> fold_of;
  std::vector<int> fold_pos(plan.k);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = fold_of.emplace(groups[i], plan.assignments[i]);
    EXPECT_EQ(it->second, plan.assignments[i]);
    fold_pos[plan.assignments[i]] += labels[i];
  }
  for (int c : fold_pos) EXPECT_GE(c, 1);
  std::vector<std::size_t> short_groups(3);
  EXPECT_THROW(PlanGroupedFolds(labels, short_groups, 1), Error);
}

TEST(MetricsTest, HandCountsAndUndefinedFlags) {
  Confusion c{3, 1, 2, 4, 7, 10};
  auto m = MetricsFromCounts(c);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.7);
  EXPECT_DOUBLE_EQ(m.precision, 0.75);
  EXPECT_DOUBLE_EQ(m.recall, 0.6);
  EXPECT_DOUBLE_EQ(m.f_score, 2 * 0.75 * 0.6 / 1.35);
  EXPECT_EQ(m.support, 5u);

  auto none = MetricsFromCounts(Confusion{0, 0, 0, 5, 5, 5});
  EXPECT_TRUE(none.precision_undefined);
  EXPECT_TRUE(none.recall_undefined);
  EXPECT_TRUE(none.f_undefined);
  EXPECT_FALSE(none.accuracy_undefined);
  EXPECT_EQ(none.f_score, 0.0);
  EXPECT_TRUE(MetricsFromCounts(Confusion{}).accuracy_undefined);
}

TEST(MetricsTest, CountsOverrideAccuracyWhenGiven) {
  // Two-bit event counting: a misdirected pair is both a FP and a FN.
  Confusion c{1, 1, 1, 2, 3, 4};
  auto m = MetricsFromCounts(c);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.75);
  EXPECT_DOUBLE_EQ(m.precision, 0.5);
}

TEST(MetricsTest, BinaryMetricsMatchesBruteForce) {
  Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.Below(60);
    auto gold = RandomLabels(n, rng.Uniform(), rng);
    auto pred = RandomLabels(n, rng.Uniform(), rng);
    auto m = BinaryMetrics(gold, pred);
    auto o = oracle::Metrics(gold, pred);
    EXPECT_NEAR(m.accuracy, o.accuracy, 1e-12);
    EXPECT_NEAR(m.precision, o.precision, 1e-12);
    EXPECT_NEAR(m.recall, o.recall, 1e-12);
    EXPECT_NEAR(m.f_score, o.f, 1e-12);
  }
  std::vector<int> a(3), b(2);
  EXPECT_THROW(BinaryMetrics(a, b), Error);
}

TEST(CurvesTest, HandExample) {
  std::vector<ScoredLabel> pool{{0.9, 1}, {0.8, 0}, {0.7, 1}, {0.1, 0}};
  auto c = ComputeMicroCurves(pool);
  ASSERT_EQ(c.roc.points.size(), 5u);
  EXPECT_EQ(c.roc.points.front().x, 0.0);
  EXPECT_EQ(c.roc.points.front().y, 0.0);
  EXPECT_TRUE(std::isinf(c.roc.points.front().threshold));
  EXPECT_EQ(c.roc.points.back().x, 1.0);
  EXPECT_EQ(c.roc.points.back().y, 1.0);
  EXPECT_DOUBLE_EQ(c.roc.auc, 0.75);
  EXPECT_EQ(c.prc.points.front().x, 0.0);
  EXPECT_EQ(c.prc.points.front().y, 1.0);
  EXPECT_DOUBLE_EQ(c.prc.points.back().y, 0.5);
  // (0,1) (.5,1) (.5,.5) (1,2/3) (1,.5)
  EXPECT_NEAR(c.prc.auc, 0.5 + 0.5 * (0.5 + 2.0 / 3.0) / 2, 1e-15);
}

TEST(CurvesTest, TiesCollapseToOnePoint) {
  std::vector<ScoredLabel> pool{{0.5, 1}, {0.5, 0}, {0.5, 1}};
  auto c = ComputeMicroCurves(pool);
  EXPECT_EQ(c.roc.points.size(), 2u);
  EXPECT_DOUBLE_EQ(c.roc.auc, 0.5);
}

TEST(CurvesTest, MatchesBruteForceOracle) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.Below(80);
    std::vector<ScoredLabel> pool(n);
    for (auto &s : pool) {
      s.label = rng.Uniform() < 0.4;
      s.score = std::round(rng.Uniform() * 20) / 20;
    }
    pool[0].label = 1;
    pool[1].label = 0;
    auto c = ComputeMicroCurves(pool);
    auto o = oracle::MicroCurves(pool);
    ASSERT_EQ(c.roc.points.size(), o.roc.size());
    for (std::size_t i = 0; i < o.roc.size(); ++i) {
      EXPECT_NEAR(c.roc.points[i].x, o.roc[i].x, 1e-12);
      EXPECT_NEAR(c.roc.points[i].y, o.roc[i].y, 1e-12);
      EXPECT_NEAR(c.prc.points[i].x, o.prc[i].x, 1e-12);
      EXPECT_NEAR(c.prc.points[i].y, o.prc[i].y, 1e-12);
    }
    EXPECT_NEAR(c.roc.auc, o.roc_auc, 1e-12);
    EXPECT_NEAR(c.prc.auc, o.prc_auc, 1e-12);
    EXPECT_NEAR(c.roc.auc, oracle::MannWhitney(pool), 1e-12);
  }
}

TEST(CurvesTest, DegeneratePoolsThrow) {
  std::vector<ScoredLabel> one{{0.3, 1}, {0.4, 1}};
  EXPECT_THROW(ComputeMicroCurves(one), Error);
  std::vector<ScoredLabel> nan{{0.3, 1},
                               {std::numeric_limits<double>::quiet_NaN(), 0}};
  EXPECT_THROW(ComputeMicroCurves(nan), Error);
}

TEST(CurvesTest, TsvLayout) {
  std::vector<ScoredLabel> pool{{0.9, 1}, {0.2, 0}};
  auto c = ComputeMicroCurves(pool);
  const std::string tsv = CurveTsv(c.roc, "fpr", "tpr");
  EXPECT_EQ(tsv.substr(0, tsv.find('\n')), "fpr\ttpr\tthreshold");
  EXPECT_EQ(std::count(tsv.begin(), tsv.end(), '\n'), 4);
}

CrossValConfig SmallConfig() {
  CrossValConfig cfg;
  cfg.argument.window = 3;
  cfg.argument.lstm_hidden = 6;
  cfg.argument.mlp_hidden = 6;
  cfg.argument.epochs = 3;
  cfg.event.hidden = 6;
  cfg.event.epochs = 3;
  cfg.seed = 4;
  return cfg;
}

corpus::Corpus SmallSynthetic() {
  synth::SynthOptions opts;
  opts.documents = 12;
  opts.sentences_per_document = 3;
  return synth::ParseDocuments(synth::GenerateDocuments(opts),
                               synth::SynthSchema());
}

TEST(CrossValidateTest, ProducesRowsPoolsAndDeterministicReports) {
  const auto corpus = SmallSynthetic();
  auto table = embed::EmbeddingTable::MakeHashed(8, 3);
  auto cfg = SmallConfig();
  auto a = CrossValidate(corpus, table, cfg);
  ASSERT_EQ(a.rows.size(), 3u);
  EXPECT_EQ(a.rows[0].kind, "argument");
  EXPECT_EQ(a.rows[2].kind, "event");
  EXPECT_EQ(a.rows[2].name, "Activation");
  // Every sample is tested exactly once.
  std::size_t entities = 0;
  for (const auto &d : corpus.documents) entities += d.entities.size();
  EXPECT_EQ(a.rows[0].metrics.counts.total, entities);
  EXPECT_EQ(a.argument_pool.size(), 2 * entities);
  std::size_t pairs = 0;
  for (const auto &d : corpus.documents) {
    for (const auto &s : d.document.sentences) {
      pairs += s.entities.size() * (s.entities.size() - 1);
    }
  }
  EXPECT_EQ(a.rows[2].metrics.counts.total, pairs);
  EXPECT_EQ(a.event_pool.size(), pairs);

  cfg.jobs = 2;
  auto b = CrossValidate(corpus, table, cfg);
  EXPECT_EQ(ReportJson(a).dump(), ReportJson(b).dump());
  EXPECT_EQ(ReportCsv(a), ReportCsv(b));
  const std::string csv = ReportCsv(a);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "kind,class,folds,accuracy,precision,recall,f_score,tp,fp,fn,tn,"
            "support");
  EXPECT_TRUE(TimingJson(a).contains("total_seconds"));
  EXPECT_FALSE(ReportJson(a).dump().find("seconds") != std::string::npos);
}

TEST(CrossValidateTest, SparseClassesAreSkippedWithReason) {
  const auto corpus = corpus::LoadCorpus(
      {std::string(VECEVENT_FIXTURES) + "/bgi2011"},
      TaskSchema::Builtin("bgi2011"));
  auto table = embed::EmbeddingTable::MakeHashed(8, 3);
  auto cfg = SmallConfig();
  auto r = CrossValidate(corpus, table, cfg);
  EXPECT_FALSE(r.skipped.empty());
  for (const auto &s : r.skipped) EXPECT_FALSE(s.reason.empty());
  EXPECT_EQ(r.rows.size() + r.skipped.size(),
            corpus.schema.ArgumentTypes().size() + corpus.schema.events().size());
}

}  // namespace
}  // namespace vecevent::evalkit
