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

#include "vecevent/schema.h"

#include <fstream>
#include <sstream>

#include "vecevent/error.h"

namespace vecevent {
namespace {

constexpr std::string_view kBb2016 = R"(# Bacteria Biotopes 2016, Lives_In relations.
task bb2016
event Lives_In Bacteria Location
role Bacteria Bacteria
role Location Habitat Geographical
ignore Title
ignore Paragraph
)";

constexpr std::string_view kBgi2011 = R"(# Bacteria Gene Interactions 2011.
task bgi2011
event ActionTarget Action Target
event Interaction Agent Target
event PromoterDependence Promoter Protein
event PromoterOf Promoter Gene
event RegulonDependence Regulon Target
event RegulonMember Regulon Member
event SiteOf Site Entity
event TranscriptionBy Transcription Agent
event TranscriptionFrom Transcription Site
)";

constexpr std::string_view kSynthetic = R"(# Planted-pattern test corpus.
task synthetic
event Activation Agent Target
)";

}  // namespace

TaskSchema TaskSchema::Parse(std::string_view text) {
  TaskSchema schema;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::vector<std::string> words;
    for (std::string w; fields >> w;) words.push_back(w);
    if (words.empty()) continue;
    const std::string &directive = words[0];
    if (directive == "task" && words.size() == 2) {
      schema.name_ = words[1];
    } else if (directive == "event" && words.size() == 4) {
      if (words[2] == words[3]) {
        throw Error(ErrorKind::kSchema,
                    "event " + words[1] + " uses one role for both ends", "",
                    line_no);
      }
      if (schema.FindEvent(words[1]) != nullptr) {
        throw Error(ErrorKind::kSchema, "duplicate event type " + words[1], "",
                    line_no);
      }
      schema.events_.push_back({words[1], words[2], words[3]});
    } else if (directive == "ignore" && words.size() == 2) {
      schema.ignored_.insert(words[1]);
    } else if (directive == "role" && words.size() >= 3) {
      auto &types = schema.role_types_[words[1]];
      types.insert(words.begin() + 2, words.end());
    } else {
      throw Error(ErrorKind::kSchema, "bad schema directive: " + line, "",
                  line_no);
    }
  }
  if (schema.events_.empty()) {
    throw Error(ErrorKind::kSchema, "schema declares no event types");
  }
  return schema;
}

TaskSchema TaskSchema::LoadFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open schema file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Parse(buffer.str());
  } catch (const Error &e) {
    throw e.WithFile(path);
  }
}

TaskSchema TaskSchema::Builtin(std::string_view name) {
  if (name == "bb2016") return Parse(kBb2016);
  if (name == "bgi2011") return Parse(kBgi2011);
  if (name == "synthetic") return Parse(kSynthetic);
  throw Error(ErrorKind::kConfig,
              "unknown builtin schema '" + std::string(name) +
                  "' (expected bb2016, bgi2011 or synthetic)");
}

TaskSchema TaskSchema::Resolve(const std::string &name_or_path) {
  if (name_or_path == "bb2016" || name_or_path == "bgi2011" ||
      name_or_path == "synthetic") {
    return Builtin(name_or_path);
  }
  return LoadFile(name_or_path);
}

std::string TaskSchema::ToText() const {
  std::ostringstream out;
  if (!name_.empty()) out << "task " << name_ << "\n";
  for (const auto &e : events_) {
    out << "event " << e.type << " " << e.source_role << " " << e.target_role
        << "\n";
  }
  for (const auto &[role, types] : role_types_) {
    out << "role " << role;
    for (const auto &t : types) out << " " << t;
    out << "\n";
  }
  for (const auto &t : ignored_) out << "ignore " << t << "\n";
  return out.str();
}

const EventSignature *TaskSchema::FindEvent(std::string_view type) const {
  for (const auto &e : events_) {
    if (e.type == type) return &e;
  }
  return nullptr;
}

std::vector<std::string> TaskSchema::ArgumentTypes() const {
  std::vector<std::string> roles;
  auto add = [&roles](const std::string &r) {
    for (const auto &x : roles) {
      if (x == r) return;
    }
    roles.push_back(r);
  };
  for (const auto &e : events_) {
    add(e.source_role);
    add(e.target_role);
  }
  return roles;
}

bool TaskSchema::IsIgnored(std::string_view entity_type) const {
  return ignored_.count(std::string(entity_type)) > 0;
}

bool TaskSchema::RoleAccepts(const std::string &role,
                             const std::string &entity_type) const {
  auto it = role_types_.find(role);
  if (it == role_types_.end()) return true;
  return it->second.count(entity_type) > 0;
}

void TaskSchema::AddEvent(EventSignature signature) {
  if (FindEvent(signature.type) != nullptr) {
    throw Error(ErrorKind::kSchema, "duplicate event type " + signature.type);
  }
  events_.push_back(std::move(signature));
}

}  // namespace vecevent
