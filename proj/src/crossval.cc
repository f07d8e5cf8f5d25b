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
#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <tuple>

#include "fmt/format.h"
#include "spdlog/spdlog.h"
#include "vecevent/error.h"
#include "vecevent/evalkit.h"
#include "vecevent/parallel.h"
#include "vecevent/pipeline.h"

namespace vecevent::evalkit {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct FoldOutcome {
  Confusion counts;
  std::vector<ScoredLabel> scores;
  double train_seconds = 0.0;
  double test_seconds = 0.0;
  std::optional<std::string> error;
};

// Runs every fold, then reduces in fold order. Returns the first fold error.
std::optional<std::string> RunFolds(
    int k, int jobs, std::vector<FoldOutcome> &outcomes,
    const std::function<void(int, FoldOutcome &)> &fold_fn) {
  outcomes.assign(static_cast<std::size_t>(k), {});
  ParallelFor(outcomes.size(), jobs, [&](std::size_t f) {
    try {
      fold_fn(static_cast<int>(f), outcomes[f]);
    } catch (const Error &e) {
      outcomes[f].error = fmt::format("fold {}: {}", f, e.what());
    }
  });
  for (const FoldOutcome &o : outcomes) {
    if (o.error) return o.error;
  }
  return std::nullopt;
}

ClassReport Reduce(const std::string &kind, const std::string &name, int k,
                   const std::vector<FoldOutcome> &outcomes,
                   std::vector<ScoredLabel> &pool) {
  Confusion total;
  double train = 0.0, test = 0.0;
  for (const FoldOutcome &o : outcomes) {
    total += o.counts;
    train += o.train_seconds;
    test += o.test_seconds;
    pool.insert(pool.end(), o.scores.begin(), o.scores.end());
  }
  ClassReport row{kind, name, k, MetricsFromCounts(total)};
  row.metrics.train_seconds = train;
  row.metrics.test_seconds = test;
  return row;
}

void ArgumentRows(const pipeline::Workspace &ws, const CrossValConfig &config,
                  CrossValReport &report) {
  const corpus::Corpus &corpus = ws.corpus();
  for (const std::string &role : corpus.schema.ArgumentTypes()) {
    auto samples = pipeline::ArgumentSamples(ws, role);
    std::vector<int> labels;
    std::vector<std::size_t> groups;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      labels.push_back(samples[i].label);
      groups.push_back(config.document_split ? ws.refs()[i].doc : i);
    }
    FoldPlan plan;
    try {
      plan = PlanGroupedFolds(labels, groups,
                              DeriveSeed(config.seed, "folds/argument/" + role),
                              config.folds);
    } catch (const Error &e) {
      report.skipped.push_back({"argument", role, e.what()});
      spdlog::warn("crossval: skipping argument {}: {}", role, e.what());
      continue;
    }
    std::vector<FoldOutcome> outcomes;
    auto error = RunFolds(plan.k, config.jobs, outcomes,
                          [&](int fold, FoldOutcome &out) {
      std::vector<vecent::ArgSample> train, test;
      for (std::size_t i : plan.TrainIndices(fold)) train.push_back(samples[i]);
      for (std::size_t i : plan.TestIndices(fold)) test.push_back(samples[i]);
      Rng rng(DeriveSeed(config.seed, "train/argument/" + role,
                         static_cast<std::uint64_t>(fold)));
      auto start = Clock::now();
      auto trained = vecent::TrainArgumentModel(role, ws.windows(), train,
                                                config.argument, rng);
      out.train_seconds = Seconds(start);
      start = Clock::now();
      std::vector<const vecent::ContextWindow *> batch;
      for (const auto &s : test) batch.push_back(&ws.windows()[s.window]);
      const auto probs = trained.model.PredictBatch(batch);
      for (std::size_t i = 0; i < test.size(); ++i) {
        const bool g = test[i].label == 1, p = probs[i] >= config.threshold;
        if (g && p) ++out.counts.tp;
        else if (p) ++out.counts.fp;
        else if (g) ++out.counts.fn;
        else ++out.counts.tn;
        out.scores.push_back({probs[i], test[i].label});
      }
      out.counts.correct = out.counts.tp + out.counts.tn;
      out.counts.total = test.size();
      out.test_seconds = Seconds(start);
    });
    if (error) {
      report.skipped.push_back({"argument", role, *error});
      spdlog::warn("crossval: skipping argument {}: {}", role, *error);
      continue;
    }
    report.rows.push_back(
        Reduce("argument", role, plan.k, outcomes, report.argument_pool));
    spdlog::info("crossval: argument {} k={} F={:.4f}", role, plan.k,
                 report.rows.back().metrics.f_score);
  }
}

void EventRows(const pipeline::Workspace &ws, const CrossValConfig &config,
               CrossValReport &report) {
  const corpus::Corpus &corpus = ws.corpus();
  for (const EventSignature &sig : corpus.schema.events()) {
    const auto pairs =
        pipeline::EventPairs(ws, sig, config.typed_candidates);
    std::vector<int> labels;
    std::vector<std::size_t> groups;
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t>
        unordered;
    for (const pipeline::PairRecord &p : pairs) {
      labels.push_back(p.label.exists);
      if (config.document_split) {
        groups.push_back(p.doc);
      } else {
        const auto [lo, hi] = std::minmax(p.pair.first, p.pair.second);
        auto it = unordered.emplace(std::tuple(p.doc, lo, hi), unordered.size())
                      .first;
        groups.push_back(it->second);
      }
    }
    FoldPlan plan;
    try {
      plan = PlanGroupedFolds(labels, groups,
                              DeriveSeed(config.seed, "folds/event/" + sig.type),
                              config.folds);
    } catch (const Error &e) {
      report.skipped.push_back({"event", sig.type, e.what()});
      spdlog::warn("crossval: skipping event {}: {}", sig.type, e.what());
      continue;
    }
    std::vector<std::string> roles{sig.source_role};
    if (sig.target_role != sig.source_role) roles.push_back(sig.target_role);

    std::vector<FoldOutcome> outcomes;
    auto error = RunFolds(plan.k, config.jobs, outcomes,
                          [&](int fold, FoldOutcome &out) {
      const auto test_idx = plan.TestIndices(fold);
      const auto train_idx = plan.TrainIndices(fold);
      std::set<std::size_t> held_out;
      for (std::size_t i : test_idx) {
        held_out.insert(pairs[i].first_ref);
        held_out.insert(pairs[i].second_ref);
      }
      std::vector<std::size_t> arg_subset;
      for (std::size_t r = 0; r < ws.size(); ++r) {
        if (!held_out.contains(r)) arg_subset.push_back(r);
      }
      auto start = Clock::now();
      pipeline::ArgumentModels models;
      for (const std::string &role : roles) {
        Rng rng(DeriveSeed(config.seed, "train/event/" + sig.type + "/" + role,
                           static_cast<std::uint64_t>(fold)));
        auto samples = pipeline::ArgumentSamples(ws, role, arg_subset);
        auto trained = vecent::TrainArgumentModel(role, ws.windows(), samples,
                                                  config.argument, rng);
        models.emplace(role, std::move(trained.model));
      }
      const auto cache = pipeline::ComputeEmbeddings(ws, models, roles);
      const vecent::Matrix composed =
          pipeline::ComposeInputs(cache, sig, pairs);
      vecent::Matrix train_x(composed.rows(),
                             static_cast<Eigen::Index>(train_idx.size()));
      std::vector<vecom::PairLabel> train_y;
      for (std::size_t j = 0; j < train_idx.size(); ++j) {
        train_x.col(static_cast<Eigen::Index>(j)) =
            composed.col(static_cast<Eigen::Index>(train_idx[j]));
        train_y.push_back(pairs[train_idx[j]].label);
      }
      Rng rng(DeriveSeed(config.seed, "train/event/" + sig.type,
                         static_cast<std::uint64_t>(fold)));
      auto trained =
          vecom::TrainEventModel(sig, train_x, train_y, config.event, rng);
      out.train_seconds = Seconds(start);

      start = Clock::now();
      vecent::Matrix test_x(composed.rows(),
                            static_cast<Eigen::Index>(test_idx.size()));
      for (std::size_t j = 0; j < test_idx.size(); ++j) {
        test_x.col(static_cast<Eigen::Index>(j)) =
            composed.col(static_cast<Eigen::Index>(test_idx[j]));
      }
      const auto preds = trained.model.Predict(test_x);
      for (std::size_t j = 0; j < test_idx.size(); ++j) {
        const vecom::PairLabel gold = pairs[test_idx[j]].label;
        const bool exists = preds[j].p_exists >= config.threshold;
        const bool forward = exists && preds[j].p_forward >= 0.5;
        if (gold.exists && exists) {
          if (forward == (gold.forward == 1)) {
            ++out.counts.tp;
            ++out.counts.correct;
          } else {
            ++out.counts.fp;
            ++out.counts.fn;
          }
        } else if (exists) {
          ++out.counts.fp;
        } else if (gold.exists) {
          ++out.counts.fn;
        } else {
          ++out.counts.tn;
          ++out.counts.correct;
        }
        out.scores.push_back({preds[j].p_exists, gold.exists});
      }
      out.counts.total = test_idx.size();
      out.test_seconds = Seconds(start);
    });
    if (error) {
      report.skipped.push_back({"event", sig.type, *error});
      spdlog::warn("crossval: skipping event {}: {}", sig.type, *error);
      continue;
    }
    report.rows.push_back(
        Reduce("event", sig.type, plan.k, outcomes, report.event_pool));
    spdlog::info("crossval: event {} k={} F={:.4f}", sig.type, plan.k,
                 report.rows.back().metrics.f_score);
  }
}

nlohmann::ordered_json CurveSummary(const std::vector<ScoredLabel> &pool) {
  nlohmann::ordered_json j;
  j["samples"] = pool.size();
  try {
    const MicroCurves curves = ComputeMicroCurves(pool);
    j["roc_auc"] = curves.roc.auc;
    j["prc_auc"] = curves.prc.auc;
  } catch (const Error &) {
    j["roc_auc"] = nullptr;
    j["prc_auc"] = nullptr;
  }
  return j;
}

}  // namespace

CrossValReport CrossValidate(const corpus::Corpus &corpus,
                             const embed::EmbeddingTable &table,
                             const CrossValConfig &config) {
  const auto start = Clock::now();
  CrossValReport report;
  report.task = corpus.schema.name();
  report.seed = config.seed;
  pipeline::Workspace ws(corpus, table, config.argument.window, config.jobs);
  if (ws.size() == 0) {
    throw Error(ErrorKind::kData, "corpus has no aligned entities");
  }
  if (config.argument_rows) ArgumentRows(ws, config, report);
  if (config.event_rows) EventRows(ws, config, report);
  report.total_seconds = Seconds(start);
  return report;
}

nlohmann::ordered_json ReportJson(const CrossValReport &report) {
  nlohmann::ordered_json j;
  j["task"] = report.task;
  j["seed"] = report.seed;
  auto &rows = j["rows"] = nlohmann::ordered_json::array();
  for (const ClassReport &r : report.rows) {
    const MetricsReport &m = r.metrics;
    nlohmann::ordered_json row;
    row["kind"] = r.kind;
    row["class"] = r.name;
    row["folds"] = r.k;
    row["accuracy"] = m.accuracy;
    row["precision"] = m.precision;
    row["recall"] = m.recall;
    row["f_score"] = m.f_score;
    row["tp"] = m.counts.tp;
    row["fp"] = m.counts.fp;
    row["fn"] = m.counts.fn;
    row["tn"] = m.counts.tn;
    row["support"] = m.support;
    row["samples"] = m.counts.total;
    auto &undefined = row["undefined"] = nlohmann::ordered_json::array();
    if (m.accuracy_undefined) undefined.push_back("accuracy");
    if (m.precision_undefined) undefined.push_back("precision");
    if (m.recall_undefined) undefined.push_back("recall");
    if (m.f_undefined) undefined.push_back("f_score");
    rows.push_back(std::move(row));
  }
  auto &skipped = j["skipped"] = nlohmann::ordered_json::array();
  for (const SkippedClass &s : report.skipped) {
    skipped.push_back({{"kind", s.kind}, {"class", s.name}, {"reason", s.reason}});
  }
  j["micro"]["argument"] = CurveSummary(report.argument_pool);
  j["micro"]["event"] = CurveSummary(report.event_pool);
  return j;
}

std::string ReportCsv(const CrossValReport &report) {
  std::string out =
      "kind,class,folds,accuracy,precision,recall,f_score,tp,fp,fn,tn,"
      "support\n";
  for (const ClassReport &r : report.rows) {
    const MetricsReport &m = r.metrics;
    out += fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{},{},{},{},{}\n",
                       r.kind, r.name, r.k, m.accuracy, m.precision, m.recall,
                       m.f_score, m.counts.tp, m.counts.fp, m.counts.fn,
                       m.counts.tn, m.support);
  }
  return out;
}

nlohmann::ordered_json TimingJson(const CrossValReport &report) {
  nlohmann::ordered_json j;
  j["total_seconds"] = report.total_seconds;
  auto &rows = j["rows"] = nlohmann::ordered_json::array();
  for (const ClassReport &r : report.rows) {
    rows.push_back({{"kind", r.kind},
                    {"class", r.name},
                    {"train_seconds", r.metrics.train_seconds},
                    {"test_seconds", r.metrics.test_seconds}});
  }
  return j;
}

}  // namespace vecevent::evalkit
