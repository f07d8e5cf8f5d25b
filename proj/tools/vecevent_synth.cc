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

// Writes a planted-pattern corpus (task "synthetic") in standoff layout.

#include <iostream>

#include "CLI11.hpp"
#include "vecevent/error.h"
#include "vecevent/synth.h"

int main(int argc, char **argv) {
  CLI::App app{"Write a planted-pattern Activation corpus"};
  vecevent::synth::SynthOptions options;
  std::string directory;
  app.add_option("--documents", options.documents)->capture_default_str();
  app.add_option("--sentences", options.sentences_per_document)
      ->capture_default_str();
  app.add_option("--distractor-rate", options.distractor_rate)
      ->capture_default_str();
  app.add_option("--name-pool", options.name_pool,
                 "Distinct gene names (0: a fresh name per mention)")
      ->capture_default_str();
  app.add_option("--seed", options.seed)->capture_default_str();
  app.add_option("dir", directory, "Output directory")->required();
  CLI11_PARSE(app, argc, argv);
  try {
    const auto docs = vecevent::synth::GenerateDocuments(options);
    vecevent::synth::WriteDocuments(docs, directory);
    std::cout << docs.size() << " documents written to " << directory << "\n";
  } catch (const vecevent::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
