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

// One line per acceptance criterion; exits non-zero when any criterion fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include <fmt/core.h>
#include <spdlog/spdlog.h>

#include "commands.h"
#include "oracles.h"
#include "vecevent/corpus.h"
#include "vecevent/embed.h"
#include "vecevent/evalkit.h"
#include "vecevent/gradcheck_suite.h"
#include "vecevent/synth.h"
#include "vecevent/vecent.h"
#include "vecevent/vecom.h"

namespace {

using namespace vecevent;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  enum { kPass, kFail, kSkip } status;
  std::string detail;
};

int failures = 0;

void Report(int id, const std::string &title, const Outcome &o) {
  const char *tag = o.status == Outcome::kPass   ? "PASS"
                    : o.status == Outcome::kFail ? "FAIL"
                                                 : "SKIP";
  if (o.status == Outcome::kFail) ++failures;
  std::cout << fmt::format("criterion {}: {} {} ({})", id, tag, title, o.detail)
            << std::endl;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

corpus::Corpus Fixture(const std::string &task) {
  return corpus::LoadCorpus({std::string(VECEVENT_FIXTURES) + "/" + task},
                            TaskSchema::Builtin(task));
}

Outcome Gradients() {
  const auto start = Clock::now();
  const auto cases = RunGradcheckSuite(20260101);
  double worst = 0.0;
  std::string worst_name;
  std::set<std::string> names;
  bool ok = true;
  for (const auto &c : cases) {
    names.insert(c.name);
    ok = ok && c.passed;
    if (c.max_relative_error >= worst) {
      worst = c.max_relative_error;
      worst_name = c.name;
    }
  }
  for (const char *required :
       {"tanh", "sigmoid", "relu", "abs", "sub", "concat", "affine",
        "weighted_bce", "lstm_step", "argument_model", "event_model"}) {
    if (!names.count(required)) {
      ok = false;
      worst_name += std::string(" missing ") + required;
    }
  }
  const double secs = Seconds(start);
  ok = ok && worst <= 1e-4 && secs < 60.0;
  return {ok ? Outcome::kPass : Outcome::kFail,
          fmt::format("{} cases, max rel err {:.2e} in {}, {:.1f}s",
                      cases.size(), worst, worst_name, secs)};
}

Outcome Windows() {
  using Slots = std::vector<std::optional<std::string>>;
  const auto corpus = Fixture("bgi2011");
  const corpus::AnnotatedDocument *doc = nullptr;
  for (const auto &d : corpus.documents) {
    if (d.document.id == "PMID-8051003-S4") doc = &d;
  }
  if (doc == nullptr) return {Outcome::kFail, "GerE fixture missing"};
  auto table = embed::EmbeddingTable::MakeHashed(8, 1);
  auto find = [&](const std::string &surface) -> const corpus::Entity & {
    for (const auto &e : doc->entities) {
      if (doc->document.text.substr(e.span.begin, e.span.length()) == surface)
        return e;
    }
    throw std::runtime_error("missing " + surface);
  };
  const auto &s = doc->document.sentences[0];
  auto p = vecent::BuildContext(s, find("promoters"), 3, table);
  auto c = vecent::BuildContext(s, find("cotB"), 3, table);
  auto show = [](const Slots &slots) {
    std::string out;
    for (const auto &t : slots) out += (out.empty() ? "" : ",") + t.value_or("PAD");
    return "[" + out + "]";
  };
  const bool ok =
      p.left == Slots{"adheres", "to", "the", "promoters"} &&
      p.right == Slots{"and", "cotB", "for", "promoters"} &&
      c.left == Slots{"the", "promoters", "for", "cotB"} &&
      c.right == Slots{std::nullopt, "cotC", "and", "cotB"} &&
      c.right_vectors.col(0).isZero();
  return {ok ? Outcome::kPass : Outcome::kFail,
          "promoters " + show(p.left) + show(p.right) + ", cotB " +
              show(c.left) + show(c.right)};
}

using EventKey = std::tuple<std::string, std::string, std::string>;

Outcome RoundTrip() {
  std::size_t discrepancies = 0, events = 0;
  bool case_study = false;
  for (const std::string task : {"bgi2011", "bb2016"}) {
    const auto corpus = Fixture(task);
    for (const auto &doc : corpus.documents) {
      std::set<EventKey> decoded, gold;
      for (const auto &sig : corpus.schema.events()) {
        for (std::size_t s = 0; s < doc.document.sentences.size(); ++s) {
          auto pairs = vecom::GenerateCandidates(doc, s);
          auto labels = vecom::LabelPairs(doc, pairs, sig.type);
          std::vector<vecom::EventPrediction> preds;
          for (const auto &l : labels) {
            preds.push_back({double(l.exists), double(l.forward)});
          }
          for (const auto &e : vecom::DecodeEvents(doc, pairs, preds, sig.type)) {
            decoded.insert({e.type, e.source, e.target});
          }
        }
      }
      for (const auto &e : doc.events) {
        if (!e.cross_sentence) gold.insert({e.type, e.source, e.target});
      }
      events += gold.size();
      for (const auto &k : decoded) discrepancies += !gold.count(k);
      for (const auto &k : gold) discrepancies += !decoded.count(k);
      if (doc.document.id == "PMID-10629188-S5") {
        case_study = decoded == std::set<EventKey>{
                                    {"ActionTarget", "T1", "T2"},
                                    {"Interaction", "T3", "T2"},
                                    {"Interaction", "T4", "T2"}};
      }
    }
  }
  const bool ok = discrepancies == 0 && case_study && events > 0;
  return {ok ? Outcome::kPass : Outcome::kFail,
          fmt::format("{} gold events, {} discrepancies, case-study sentence "
                      "{}",
                      events, discrepancies, case_study ? "exact" : "wrong")};
}

Outcome Oversampling() {
  Rng rng(4242);
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 20 + rng.Below(400);
    const double p = rng.Uniform(0.02, 0.5);
    std::vector<int> labels(n);
    for (int &l : labels) l = rng.Uniform() < p;
    labels[0] = 1;
    for (std::size_t i = 1; i < 6; ++i) labels[i] = 1;
    labels[n - 1] = 0;
    const auto plan = evalkit::PlanFolds(labels, trial, {10, 5, 20});
    const auto test = plan.TestIndices(0);
    const auto train = plan.TrainIndices(0);
    const std::vector<int> test_before = [&] {
      std::vector<int> v;
      for (std::size_t i : test) v.push_back(labels[i]);
      return v;
    }();
    std::vector<int> train_labels;
    for (std::size_t i : train) train_labels.push_back(labels[i]);
    const auto idx = vecent::OversampleIndices(train_labels, 5.0, rng);
    std::size_t pos = 0;
    std::set<std::size_t> touched;
    for (std::size_t k : idx) {
      pos += train_labels[k];
      touched.insert(train[k]);
    }
    const std::size_t neg = idx.size() - pos;
    const std::size_t maj = std::max(pos, neg), mnr = std::min(pos, neg);
    bool ok = maj <= 5 * mnr;
    // Minimal: dropping one duplicate would break the bound.
    if (idx.size() > train.size()) ok = ok && maj > 5 * (mnr - 1);
    for (std::size_t i : test) ok = ok && !touched.count(i);
    std::vector<int> test_after;
    for (std::size_t i : plan.TestIndices(0)) test_after.push_back(labels[i]);
    ok = ok && test_after == test_before;
    violations += !ok;
  }
  return {violations == 0 ? Outcome::kPass : Outcome::kFail,
          fmt::format("100 label multisets, ratio 5, {} violations", violations)};
}

Outcome Synthetic() {
  const auto start = Clock::now();
  const auto docs = synth::GenerateDocuments({});
  const auto corpus = synth::ParseDocuments(docs, synth::SynthSchema());
  std::size_t sentences = 0;
  for (const auto &d : corpus.documents) sentences += d.document.sentences.size();
  const auto table = embed::EmbeddingTable::MakeHashed(200, 11);
  evalkit::CrossValConfig cfg;  // default hyper-parameters
  cfg.seed = 3;
  cfg.argument_rows = false;
  const auto report = evalkit::CrossValidate(corpus, table, cfg);
  const double secs = Seconds(start);
  if (report.rows.size() != 1) {
    return {Outcome::kFail, "event row missing"};
  }
  const auto &row = report.rows[0];
  const bool ok = sentences == 500 && row.k == 10 &&
                  row.metrics.f_score >= 0.90 && secs <= 900.0;
  return {ok ? Outcome::kPass : Outcome::kFail,
          fmt::format("{} sentences, {}-fold event F={:.4f}, {:.0f}s",
                      sentences, row.k, row.metrics.f_score, secs)};
}

std::string Slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "vecevent");
  std::vector<char *> argv;
  for (auto &a : args) argv.push_back(a.data());
  std::streambuf *saved = std::cout.rdbuf();
  std::ostringstream sink;
  std::cout.rdbuf(sink.rdbuf());
  const int code = cli::Main(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(saved);
  return code;
}

Outcome Determinism() {
  const fs::path root = fs::temp_directory_path() / "vecevent_acceptance";
  fs::remove_all(root);
  synth::SynthOptions opts;
  opts.documents = 30;
  opts.sentences_per_document = 4;
  synth::WriteDocuments(synth::GenerateDocuments(opts), (root / "corpus").string());
  auto args = [&](const std::string &out) {
    return std::vector<std::string>{
        "crossval", "--task", "synthetic", "--corpus", (root / "corpus").string(),
        "--out", (root / out).string(), "--embedding-dim", "32",
        "--lstm-hidden", "16", "--arg-mlp-hidden", "16", "--event-mlp-hidden",
        "16", "--epochs", "3", "--seed", "17", "--jobs", "2",
        "--log-level", "warn"};
  };
  if (RunCli(args("a")) != 0 || RunCli(args("b")) != 0) {
    return {Outcome::kFail, "crossval exited non-zero"};
  }
  std::size_t compared = 0, differing = 0;
  for (const auto &entry : fs::directory_iterator(root / "a" / "crossval")) {
    const std::string name = entry.path().filename().string();
    if (name == "timing.json") continue;
    ++compared;
    if (Slurp(entry.path()) != Slurp(root / "b" / "crossval" / name)) ++differing;
  }
  const bool ok = compared >= 6 && differing == 0;
  return {ok ? Outcome::kPass : Outcome::kFail,
          fmt::format("{} report files compared byte-for-byte, {} differ",
                      compared, differing)};
}

Outcome RealData() {
  const char *bb = std::getenv("VECEVENT_BB2016_DIR");
  const char *emb = std::getenv("VECEVENT_EMBEDDINGS");
  if (bb == nullptr || emb == nullptr || !fs::exists(bb) || !fs::exists(emb)) {
    return {Outcome::kSkip,
            "not applicable: set VECEVENT_BB2016_DIR and VECEVENT_EMBEDDINGS "
            "to the BB-2016 train+dev standoff directory and PubMed word2vec "
            "file"};
  }
  const char *fmt_env = std::getenv("VECEVENT_EMBEDDINGS_FORMAT");
  const auto corpus = corpus::LoadCorpus({bb}, TaskSchema::Builtin("bb2016"));
  const auto table = embed::EmbeddingTable::LoadFile(
      emb, embed::ParseTableFormat(fmt_env ? fmt_env : "binary"),
      embed::OovPolicy::kHashed, 13);
  evalkit::CrossValConfig cfg;
  cfg.argument_rows = false;
  const auto report = evalkit::CrossValidate(corpus, table, cfg);
  for (const auto &row : report.rows) {
    if (row.name == "Lives_In") {
      const bool ok = row.metrics.f_score >= 0.77;
      return {ok ? Outcome::kPass : Outcome::kFail,
              fmt::format("BB Lives_In F={:.4f} (bound 0.77)", row.metrics.f_score)};
    }
  }
  return {Outcome::kFail, "Lives_In row missing"};
}

Outcome Metrics() {
  Rng rng(8080);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng.Below(120);
    std::vector<int> gold(n), pred(n);
    std::vector<evalkit::ScoredLabel> pool(n);
    const double prevalence = rng.Uniform(0.05, 0.95);
    const int grid = 1 + static_cast<int>(rng.Below(50));
    for (std::size_t i = 0; i < n; ++i) {
      gold[i] = rng.Uniform() < prevalence;
      pred[i] = rng.Uniform() < 0.5;
      pool[i] = {std::round(rng.Uniform() * grid) / grid, gold[i]};
    }
    gold[0] = pool[0].label = 1;
    gold[1] = pool[1].label = 0;
    const auto m = evalkit::BinaryMetrics(gold, pred);
    const auto o = oracle::Metrics(gold, pred);
    for (double d : {m.accuracy - o.accuracy, m.precision - o.precision,
                     m.recall - o.recall, m.f_score - o.f}) {
      worst = std::max(worst, std::abs(d));
    }
    const auto c = evalkit::ComputeMicroCurves(pool);
    const auto oc = oracle::MicroCurves(pool);
    if (c.roc.points.size() != oc.roc.size() ||
        c.prc.points.size() != oc.prc.size()) {
      return {Outcome::kFail, fmt::format("curve length differs at set {}", trial)};
    }
    for (std::size_t i = 0; i < oc.roc.size(); ++i) {
      worst = std::max({worst, std::abs(c.roc.points[i].x - oc.roc[i].x),
                        std::abs(c.roc.points[i].y - oc.roc[i].y),
                        std::abs(c.prc.points[i].x - oc.prc[i].x),
                        std::abs(c.prc.points[i].y - oc.prc[i].y)});
    }
    worst = std::max({worst, std::abs(c.roc.auc - oc.roc_auc),
                      std::abs(c.prc.auc - oc.prc_auc)});
  }
  return {worst <= 1e-12 ? Outcome::kPass : Outcome::kFail,
          fmt::format("1000 random sets, max abs diff {:.1e}", worst)};
}

template <typename Fn>
void Run(int id, const std::string &title, Fn fn) {
  try {
    Report(id, title, fn());
  } catch (const std::exception &e) {
    Report(id, title, {Outcome::kFail, std::string("exception: ") + e.what()});
  }
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::warn);
  Run(1, "gradient check of every operator and both networks", Gradients);
  Run(2, "GerE u=3 context windows", Windows);
  Run(3, "label/decode round trip on both fixture corpora", RoundTrip);
  Run(4, "oversampling bound with untouched test folds", Oversampling);
  Run(5, "synthetic 500-sentence 10-fold event F >= 0.90 within 15 min",
      Synthetic);
  Run(6, "crossval reports byte-identical across runs", Determinism);
  Run(7, "BB-2016 Lives_In F >= 0.77 with real data", RealData);
  Run(8, "metrics and micro curves against brute-force oracle", Metrics);
  std::cout << (failures == 0 ? "acceptance: all criteria met"
                              : fmt::format("acceptance: {} criteria failed",
                                            failures))
            << std::endl;
  return failures == 0 ? 0 : 1;
}
