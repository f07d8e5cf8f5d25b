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

#ifndef VECEVENT_ERROR_H_
#define VECEVENT_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vecevent {

// Broad failure categories. The CLI reports these in its error JSON.
enum class ErrorKind {
  kParse,
  kIntegrity,
  kAlignment,
  kFormat,
  kShape,
  kTraining,
  kTrainingSetup,
  kConfig,
  kSchema,
  kPlanning,
  kData,
  kIo,
};

std::string_view ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}
  Error(ErrorKind kind, const std::string &message, std::string file,
        std::size_t line)
      : std::runtime_error(message),
        kind_(kind),
        file_(std::move(file)),
        line_(line) {}

  ErrorKind kind() const { return kind_; }
  const std::string &file() const { return file_; }
  // 1-based; 0 when the error is not tied to a line.
  std::size_t line() const { return line_; }

  // Returns a copy of this error annotated with a file name.
  Error WithFile(std::string file) const {
    return Error(kind_, what(), std::move(file), line_);
  }

 private:
  ErrorKind kind_;
  std::string file_;
  std::size_t line_ = 0;
};

}  // namespace vecevent

#endif  // VECEVENT_ERROR_H_
