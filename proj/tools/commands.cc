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

#include "commands.h"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "fmt/format.h"
#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"
#include "vecevent/error.h"
#include "vecevent/gradcheck_suite.h"
#include "vecevent/parallel.h"
#include "vecevent/pipeline.h"

namespace vecevent::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

void WriteText(const fs::path &path, const std::string &body) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << body;
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
}

std::string ReadText(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json ReadJson(const fs::path &path) {
  try {
    return json::parse(ReadText(path));
  } catch (const json::exception &e) {
    throw Error(ErrorKind::kFormat, e.what(), path.string(), 0);
  }
}

void CheckPositive(const char *name, double value) {
  if (!(value > 0)) {
    throw Error(ErrorKind::kConfig, fmt::format("{} must be positive", name));
  }
}

fs::path ArgsDir(const RunConfig &c) { return fs::path(c.out) / "args"; }
fs::path EventsDir(const RunConfig &c) { return fs::path(c.out) / "events"; }

json EmbeddingJson(const RunConfig &c, const embed::EmbeddingTable &table) {
  return {{"source", c.embeddings.empty() ? "hashed" : c.embeddings},
          {"dim", table.dim()},
          {"oov", c.oov},
          {"seed", c.embedding_seed}};
}

struct LoadedArguments {
  json manifest;
  pipeline::ArgumentModels models;
  int window = 0;
};

LoadedArguments LoadArgumentModels(const RunConfig &config,
                                   const embed::EmbeddingTable &table,
                                   const std::vector<std::string> &roles) {
  const fs::path dir = ArgsDir(config);
  if (!fs::exists(dir / "manifest.json")) {
    throw Error(ErrorKind::kConfig,
                "no argument models under " + dir.string() +
                    " (run train-args first)");
  }
  LoadedArguments out;
  out.manifest = ReadJson(dir / "manifest.json");
  const int input_dim = out.manifest.at("input_dim").get<int>();
  if (input_dim != table.dim()) {
    throw Error(ErrorKind::kConfig,
                fmt::format("argument models expect {}-dim embeddings, table "
                            "has {}",
                            input_dim, table.dim()));
  }
  out.window = out.manifest.at("window").get<int>();
  std::set<std::string> available;
  for (const auto &m : out.manifest.at("models")) {
    available.insert(m.at("argument_type").get<std::string>());
  }
  for (const std::string &role : roles) {
    if (!available.contains(role)) {
      throw Error(ErrorKind::kConfig,
                  "missing argument checkpoint for " + role + " in " +
                      dir.string());
    }
    vecent::ArgumentModel model(role, input_dim,
                                out.manifest.at("lstm_hidden").get<int>(),
                                out.manifest.at("mlp_hidden").get<int>(),
                                out.manifest.at("dropout").get<double>());
    const fs::path ckpt = dir / (role + ".ckpt");
    std::ifstream in(ckpt, std::ios::binary);
    if (!in) throw Error(ErrorKind::kIo, "cannot read " + ckpt.string());
    try {
      model.Load(in);
    } catch (const Error &e) {
      throw e.WithFile(ckpt.string());
    }
    out.models.emplace(role, std::move(model));
  }
  return out;
}

std::vector<std::string> AllRoles(const TaskSchema &schema) {
  return schema.ArgumentTypes();
}

}  // namespace

vecent::ArgumentHyper RunConfig::ArgumentHyper() const {
  vecent::ArgumentHyper h;
  h.window = window;
  h.lstm_hidden = lstm_hidden;
  h.mlp_hidden = arg_mlp_hidden;
  h.batch = batch;
  h.epochs = epochs;
  h.dropout = dropout;
  h.learning_rate = lr;
  h.momentum = momentum;
  h.oversample_ratio = oversample_ratio;
  return h;
}

vecom::EventHyper RunConfig::EventHyper() const {
  vecom::EventHyper h;
  h.hidden = event_mlp_hidden;
  h.batch = batch;
  h.epochs = epochs;
  h.learning_rate = lr;
  h.momentum = momentum;
  h.oversample_ratio = oversample_ratio;
  return h;
}

evalkit::CrossValConfig RunConfig::CrossValConfig() const {
  evalkit::CrossValConfig c;
  c.argument = ArgumentHyper();
  c.event = EventHyper();
  c.threshold = threshold;
  c.seed = seed;
  c.document_split = split == "document";
  c.typed_candidates = typed_candidates;
  c.jobs = jobs;
  return c;
}

void Validate(const RunConfig &c) {
  CheckPositive("window", c.window);
  CheckPositive("lstm-hidden", c.lstm_hidden);
  CheckPositive("arg-mlp-hidden", c.arg_mlp_hidden);
  CheckPositive("event-mlp-hidden", c.event_mlp_hidden);
  CheckPositive("batch", c.batch);
  CheckPositive("lr", c.lr);
  CheckPositive("embedding-dim", c.embedding_dim);
  CheckPositive("jobs", c.jobs);
  if (c.epochs < 0) throw Error(ErrorKind::kConfig, "epochs must be >= 0");
  if (c.dropout < 0 || c.dropout >= 1) {
    throw Error(ErrorKind::kConfig, "dropout must lie in [0, 1)");
  }
  if (c.momentum < 0 || c.momentum >= 1) {
    throw Error(ErrorKind::kConfig, "momentum must lie in [0, 1)");
  }
  if (!(c.oversample_ratio >= 1)) {
    throw Error(ErrorKind::kConfig, "oversample-ratio must be >= 1");
  }
  if (!(c.threshold >= 0 && c.threshold <= 1)) {
    throw Error(ErrorKind::kConfig, "threshold must lie in [0, 1]");
  }
  if (c.split != "sample" && c.split != "document") {
    throw Error(ErrorKind::kConfig, "split must be sample or document");
  }
  embed::ParseOovPolicy(c.oov);
  embed::ParseTableFormat(c.embedding_format);
}

void AddRunOptions(CLI::App &app, RunConfig &c) {
  app.add_option("--task", c.task, "Builtin schema (bb2016, bgi2011, "
                                   "synthetic) or schema file")
      ->capture_default_str();
  app.add_option("--corpus", c.corpus, "Training corpus directory")
      ->delimiter(',');
  app.add_option("--input", c.input, "Corpus directory to predict on")
      ->delimiter(',');
  app.add_option("--out", c.out, "Output directory")->capture_default_str();
  app.add_option("--embeddings", c.embeddings,
                 "word2vec file; hashed vectors when empty");
  app.add_option("--embedding-format", c.embedding_format, "text or binary")
      ->capture_default_str();
  app.add_option("--oov", c.oov, "zero or hashed")->capture_default_str();
  app.add_option("--embedding-seed", c.embedding_seed)->capture_default_str();
  app.add_option("--embedding-dim", c.embedding_dim,
                 "Dimension of hashed vectors")
      ->capture_default_str();
  app.add_option("--window", c.window)->capture_default_str();
  app.add_option("--lstm-hidden", c.lstm_hidden)->capture_default_str();
  app.add_option("--arg-mlp-hidden", c.arg_mlp_hidden)->capture_default_str();
  app.add_option("--event-mlp-hidden", c.event_mlp_hidden)
      ->capture_default_str();
  app.add_option("--batch", c.batch)->capture_default_str();
  app.add_option("--epochs", c.epochs)->capture_default_str();
  app.add_option("--dropout", c.dropout)->capture_default_str();
  app.add_option("--lr", c.lr)->capture_default_str();
  app.add_option("--momentum", c.momentum)->capture_default_str();
  app.add_option("--oversample-ratio", c.oversample_ratio)
      ->capture_default_str();
  app.add_option("--threshold", c.threshold)->capture_default_str();
  app.add_option("--seed", c.seed)->capture_default_str();
  app.add_option("--jobs", c.jobs, "Worker threads")->capture_default_str();
  app.add_flag("--typed-candidates", c.typed_candidates,
               "Keep only pairs whose entity types fit the event roles");
  app.add_option("--split", c.split, "Fold unit: sample or document")
      ->capture_default_str();
}

embed::EmbeddingTable LoadEmbeddings(const RunConfig &c) {
  if (c.embeddings.empty()) {
    return embed::EmbeddingTable::MakeHashed(c.embedding_dim,
                                             c.embedding_seed);
  }
  return embed::EmbeddingTable::LoadFile(
      c.embeddings, embed::ParseTableFormat(c.embedding_format),
      embed::ParseOovPolicy(c.oov), c.embedding_seed);
}

corpus::Corpus LoadTrainingCorpus(const RunConfig &c) {
  if (c.corpus.empty()) {
    throw Error(ErrorKind::kConfig, "no --corpus directory given");
  }
  return corpus::LoadCorpus(c.corpus, TaskSchema::Resolve(c.task), c.jobs);
}

json CmdIngest(const RunConfig &config) {
  const corpus::Corpus corpus = LoadTrainingCorpus(config);
  json stats = corpus::CorpusStatistics(corpus);
  WriteText(fs::path(config.out) / "stats.json", stats.dump(2) + "\n");
  return stats;
}

json CmdTrainArgs(const RunConfig &config) {
  const corpus::Corpus corpus = LoadTrainingCorpus(config);
  const auto table = LoadEmbeddings(config);
  const auto hyper = config.ArgumentHyper();
  pipeline::Workspace ws(corpus, table, hyper.window, config.jobs);
  const auto roles = AllRoles(corpus.schema);
  std::vector<json> entries(roles.size());
  const fs::path dir = ArgsDir(config);
  fs::create_directories(dir);
  ParallelFor(roles.size(), config.jobs, [&](std::size_t i) {
    const std::string &role = roles[i];
    Rng rng(DeriveSeed(config.seed, "train/argument/" + role));
    const auto samples = pipeline::ArgumentSamples(ws, role);
    auto result =
        vecent::TrainArgumentModel(role, ws.windows(), samples, hyper, rng);
    std::ostringstream ckpt;
    result.model.Save(ckpt);
    WriteText(dir / (role + ".ckpt"), ckpt.str());
    WriteText(dir / (role + ".epochs.csv"), vecent::EpochLogCsv(result.log));
    std::size_t positives = 0;
    for (const auto &s : samples) positives += s.label;
    entries[i] = {{"argument_type", role},
                  {"checkpoint", role + ".ckpt"},
                  {"epoch_log", role + ".epochs.csv"},
                  {"samples", samples.size()},
                  {"positives", positives},
                  {"class_weight", result.class_weight},
                  {"trained_samples", result.trained_samples}};
    spdlog::info("train-args: {} ({} positives of {})", role, positives,
                 samples.size());
  });
  json manifest;
  manifest["task"] = corpus.schema.name();
  manifest["window"] = hyper.window;
  manifest["input_dim"] = table.dim();
  manifest["lstm_hidden"] = hyper.lstm_hidden;
  manifest["mlp_hidden"] = hyper.mlp_hidden;
  manifest["dropout"] = hyper.dropout;
  manifest["embedding"] = EmbeddingJson(config, table);
  manifest["models"] = entries;
  WriteText(dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

json CmdTrainEvents(const RunConfig &config) {
  const corpus::Corpus corpus = LoadTrainingCorpus(config);
  const auto table = LoadEmbeddings(config);
  auto args = LoadArgumentModels(config, table, AllRoles(corpus.schema));
  pipeline::Workspace ws(corpus, table, args.window, config.jobs);
  const auto cache = pipeline::ComputeEmbeddings(
      ws, args.models, AllRoles(corpus.schema), config.jobs);
  const auto hyper = config.EventHyper();
  const auto &events = corpus.schema.events();
  std::vector<json> entries(events.size());
  const fs::path dir = EventsDir(config);
  fs::create_directories(dir);
  ParallelFor(events.size(), config.jobs, [&](std::size_t i) {
    const EventSignature &sig = events[i];
    const auto pairs = pipeline::EventPairs(ws, sig, config.typed_candidates);
    const auto composed = pipeline::ComposeInputs(cache, sig, pairs);
    std::vector<vecom::PairLabel> labels;
    for (const auto &p : pairs) labels.push_back(p.label);
    Rng rng(DeriveSeed(config.seed, "train/event/" + sig.type));
    auto result = vecom::TrainEventModel(sig, composed, labels, hyper, rng);
    std::ostringstream ckpt;
    result.model.Save(ckpt);
    WriteText(dir / (sig.type + ".ckpt"), ckpt.str());
    WriteText(dir / (sig.type + ".epochs.csv"),
              vecom::EventLogCsv(result.log));
    std::size_t positives = 0;
    for (const auto &l : labels) positives += l.exists;
    entries[i] = {{"event_type", sig.type},
                  {"source_role", sig.source_role},
                  {"target_role", sig.target_role},
                  {"checkpoint", sig.type + ".ckpt"},
                  {"epoch_log", sig.type + ".epochs.csv"},
                  {"pairs", pairs.size()},
                  {"positive_pairs", positives},
                  {"trained_samples", result.trained_samples}};
    spdlog::info("train-events: {} ({} positive pairs of {})", sig.type,
                 positives, pairs.size());
  });
  json manifest;
  manifest["task"] = corpus.schema.name();
  manifest["input_dim"] = 2 * args.manifest.at("mlp_hidden").get<int>();
  manifest["hidden"] = hyper.hidden;
  manifest["typed_candidates"] = config.typed_candidates;
  manifest["models"] = entries;
  WriteText(dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

json CmdPredict(const RunConfig &config) {
  if (config.input.empty()) {
    throw Error(ErrorKind::kConfig, "no --input directory given");
  }
  const TaskSchema schema = TaskSchema::Resolve(config.task);
  const corpus::Corpus corpus = corpus::LoadCorpus(config.input, schema,
                                                   config.jobs);
  const auto table = LoadEmbeddings(config);
  auto args = LoadArgumentModels(config, table, AllRoles(schema));
  const fs::path events_dir = EventsDir(config);
  if (!fs::exists(events_dir / "manifest.json")) {
    throw Error(ErrorKind::kConfig, "no event models under " +
                                        events_dir.string() +
                                        " (run train-events first)");
  }
  const json manifest = ReadJson(events_dir / "manifest.json");
  pipeline::Workspace ws(corpus, table, args.window, config.jobs);
  const auto cache = pipeline::ComputeEmbeddings(ws, args.models,
                                                 AllRoles(schema), config.jobs);
  const fs::path out_dir = fs::path(config.out) / "predict";
  fs::create_directories(out_dir);
  std::vector<std::vector<corpus::Event>> per_doc(corpus.documents.size());
  json summary;
  summary["documents"] = corpus.documents.size();
  for (const EventSignature &sig : schema.events()) {
    const json *entry = nullptr;
    for (const auto &m : manifest.at("models")) {
      if (m.at("event_type") == sig.type) entry = &m;
    }
    if (entry == nullptr) {
      throw Error(ErrorKind::kConfig,
                  "missing event checkpoint for " + sig.type);
    }
    vecom::EventModel model(sig.type, sig.source_role, sig.target_role,
                            manifest.at("input_dim").get<int>(),
                            manifest.at("hidden").get<int>());
    const fs::path ckpt = events_dir / (sig.type + ".ckpt");
    std::ifstream in(ckpt, std::ios::binary);
    if (!in) throw Error(ErrorKind::kIo, "cannot read " + ckpt.string());
    try {
      model.Load(in);
    } catch (const Error &e) {
      throw e.WithFile(ckpt.string());
    }
    const auto pairs = pipeline::EventPairs(ws, sig, config.typed_candidates);
    const auto preds =
        model.Predict(pipeline::ComposeInputs(cache, sig, pairs));
    std::string tsv = "sentence\tfirst\tsecond\tp_exists\tp_forward\n";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto &doc = corpus.documents[pairs[i].doc];
      tsv += fmt::format("{}\t{}\t{}\t{:.17g}\t{:.17g}\n",
                         doc.document.sentences[pairs[i].pair.sentence].id,
                         doc.entities[pairs[i].pair.first].id,
                         doc.entities[pairs[i].pair.second].id,
                         preds[i].p_exists, preds[i].p_forward);
    }
    WriteText(out_dir / ("pairs_" + sig.type + ".tsv"), tsv);
    auto decoded =
        pipeline::DecodeCorpus(ws, pairs, preds, sig.type, config.threshold);
    std::size_t count = 0;
    for (std::size_t d = 0; d < decoded.size(); ++d) {
      count += decoded[d].size();
      per_doc[d].insert(per_doc[d].end(), decoded[d].begin(),
                        decoded[d].end());
    }
    summary["events"][sig.type] = count;
  }
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    WriteText(out_dir / (corpus.documents[d].document.id + ".a2"),
              corpus::WriteStandoff(per_doc[d], schema));
  }
  return summary;
}

json CmdCrossval(const RunConfig &config) {
  const corpus::Corpus corpus = LoadTrainingCorpus(config);
  const auto table = LoadEmbeddings(config);
  const auto report =
      evalkit::CrossValidate(corpus, table, config.CrossValConfig());
  const fs::path dir = fs::path(config.out) / "crossval";
  const json j = evalkit::ReportJson(report);
  WriteText(dir / "report.json", j.dump(2) + "\n");
  WriteText(dir / "report.csv", evalkit::ReportCsv(report));
  WriteText(dir / "timing.json", evalkit::TimingJson(report).dump(2) + "\n");
  const std::pair<const char *, const std::vector<evalkit::ScoredLabel> *>
      pools[] = {{"argument", &report.argument_pool},
                 {"event", &report.event_pool}};
  for (const auto &[name, pool] : pools) {
    try {
      const auto curves = evalkit::ComputeMicroCurves(*pool);
      WriteText(dir / fmt::format("curves_{}_roc.tsv", name),
                evalkit::CurveTsv(curves.roc, "fpr", "tpr"));
      WriteText(dir / fmt::format("curves_{}_prc.tsv", name),
                evalkit::CurveTsv(curves.prc, "recall", "precision"));
    } catch (const Error &e) {
      spdlog::warn("crossval: no {} curves: {}", name, e.what());
    }
  }
  return j;
}

json CmdGradcheck(const RunConfig &config, bool &passed) {
  const auto cases = RunGradcheckSuite(config.seed);
  passed = true;
  json out = json::array();
  for (const auto &c : cases) {
    passed = passed && c.passed;
    out.push_back({{"case", c.name},
                   {"max_relative_error", c.max_relative_error},
                   {"worst_parameter", c.worst_parameter},
                   {"entries", c.entries},
                   {"passed", c.passed}});
  }
  return out;
}

int Main(int argc, char **argv) {
  CLI::App app{"Trigger-free biomedical event extraction"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.set_config("--config", "", "INI file with run options");
  RunConfig config;
  AddRunOptions(app, config);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error")
      ->capture_default_str();

  auto *ingest = app.add_subcommand("ingest", "Parse a corpus, write stats");
  auto *train_args =
      app.add_subcommand("train-args", "Train one argument model per role");
  auto *train_events =
      app.add_subcommand("train-events", "Train one event model per type");
  auto *predict = app.add_subcommand("predict", "Extract events from --input");
  auto *crossval = app.add_subcommand("crossval", "Cross-validate on --corpus");
  auto *gradcheck =
      app.add_subcommand("gradcheck", "Finite-difference gradient suite");
  for (CLI::App *sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  }

  auto logger = spdlog::get("vecevent");
  if (!logger) logger = spdlog::stderr_color_mt("vecevent");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    Validate(config);
    CLI::App *sub = app.get_subcommands().front();
    if (sub != gradcheck) {
      fs::create_directories(config.out);
      WriteText(fs::path(config.out) / "effective_config.ini",
                app.config_to_str(true, false));
    }
    json result;
    int code = 0;
    if (sub == ingest) {
      result = CmdIngest(config);
    } else if (sub == train_args) {
      result = CmdTrainArgs(config);
    } else if (sub == train_events) {
      result = CmdTrainEvents(config);
    } else if (sub == predict) {
      result = CmdPredict(config);
    } else if (sub == crossval) {
      result = CmdCrossval(config);
    } else if (sub == gradcheck) {
      bool passed = false;
      result = CmdGradcheck(config, passed);
      code = passed ? 0 : 1;
    }
    std::cout << result.dump(2) << "\n";
    return code;
  } catch (const Error &e) {
    json err = {{"error", ErrorKindName(e.kind())}, {"message", e.what()}};
    if (!e.file().empty()) err["file"] = e.file();
    if (e.line() != 0) err["line"] = e.line();
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump()
              << "\n";
    return 1;
  }
}

}  // namespace vecevent::cli
