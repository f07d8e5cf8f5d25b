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

#ifndef VECEVENT_SCHEMA_H_
#define VECEVENT_SCHEMA_H_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace vecevent {

// A directed event type and the argument roles at its two ends.
struct EventSignature {
  std::string type;
  std::string source_role;
  std::string target_role;
};

// Event inventory of one extraction task.
//
// Text form, one directive per line, '#' starts a comment:
//
//   task    <name>
//   event   <type> <source role> <target role>
//   ignore  <entity type>                  entity types dropped at parse time
//   role    <role> <entity type>...        entity types allowed to fill a role
//                                          (only used by typed candidates)
class TaskSchema {
 public:
  TaskSchema() = default;

  static TaskSchema Parse(std::string_view text);
  static TaskSchema LoadFile(const std::string &path);
  // "bb2016", "bgi2011" or "synthetic".
  static TaskSchema Builtin(std::string_view name);
  // Builtin name or a schema file path.
  static TaskSchema Resolve(const std::string &name_or_path);

  std::string ToText() const;

  const std::string &name() const { return name_; }
  const std::vector<EventSignature> &events() const { return events_; }
  const EventSignature *FindEvent(std::string_view type) const;
  // Distinct roles in order of first appearance.
  std::vector<std::string> ArgumentTypes() const;
  bool IsIgnored(std::string_view entity_type) const;
  // True when the role has no declared entity types or lists this one.
  bool RoleAccepts(const std::string &role,
                   const std::string &entity_type) const;

  void AddEvent(EventSignature signature);
  void AddIgnored(std::string entity_type) {
    ignored_.insert(std::move(entity_type));
  }
  void set_name(std::string name) { name_ = std::move(name); }

 private:
  std::string name_;
  std::vector<EventSignature> events_;
  std::set<std::string> ignored_;
  std::map<std::string, std::set<std::string>> role_types_;
};

}  // namespace vecevent

#endif  // VECEVENT_SCHEMA_H_
