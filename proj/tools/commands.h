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

#ifndef VECEVENT_TOOLS_COMMANDS_H_
#define VECEVENT_TOOLS_COMMANDS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vecevent/corpus.h"
#include "vecevent/embed.h"
#include "vecevent/evalkit.h"

namespace vecevent::cli {

struct RunConfig {
  std::string task = "bb2016";
  std::vector<std::string> corpus;
  std::vector<std::string> input;
  std::string out = "out";

  // Empty path means hashed vectors of embedding_dim.
  std::string embeddings;
  std::string embedding_format = "text";
  std::string oov = "hashed";
  std::uint64_t embedding_seed = 13;
  int embedding_dim = 200;

  int window = 10;
  int lstm_hidden = 128;
  int arg_mlp_hidden = 128;
  int event_mlp_hidden = 64;
  int batch = 32;
  int epochs = 10;
  double dropout = 0.2;
  double lr = 0.01;
  double momentum = 0.9;
  double oversample_ratio = 5.0;
  double threshold = 0.5;
  std::uint64_t seed = 1;

  int jobs = 1;
  bool typed_candidates = false;
  std::string split = "sample";  // or "document"

  vecent::ArgumentHyper ArgumentHyper() const;
  vecom::EventHyper EventHyper() const;
  evalkit::CrossValConfig CrossValConfig() const;
};

// Throws kConfig on out-of-range values.
void Validate(const RunConfig &config);

// Registers every run option on `app` (and, through fallthrough, on its
// subcommands).
void AddRunOptions(CLI::App &app, RunConfig &config);

embed::EmbeddingTable LoadEmbeddings(const RunConfig &config);
corpus::Corpus LoadTrainingCorpus(const RunConfig &config);

// Each command writes under config.out and returns a short JSON summary.
nlohmann::ordered_json CmdIngest(const RunConfig &config);
nlohmann::ordered_json CmdTrainArgs(const RunConfig &config);
nlohmann::ordered_json CmdTrainEvents(const RunConfig &config);
nlohmann::ordered_json CmdPredict(const RunConfig &config);
nlohmann::ordered_json CmdCrossval(const RunConfig &config);
// Returns the suite results; `passed` is false if any case failed.
nlohmann::ordered_json CmdGradcheck(const RunConfig &config, bool &passed);

// Full command-line entry point; returns the process exit code.
int Main(int argc, char **argv);

}  // namespace vecevent::cli

#endif  // VECEVENT_TOOLS_COMMANDS_H_
