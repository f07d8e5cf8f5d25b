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

#include "vecevent/embed.h"

#include <bit>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "vecevent/error.h"
#include "vecevent/random.h"

namespace vecevent::embed {
namespace {

std::string Lowercase(std::string_view word) {
  std::string out(word);
  for (char &c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

void ParseHeader(const std::string &line, std::size_t &count, int &dim) {
  std::istringstream header(line);
  long long n = -1, d = -1;
  if (!(header >> n >> d) || n < 0 || d < 1) {
    throw Error(ErrorKind::kFormat, "bad embedding header: '" + line + "'", "",
                1);
  }
  count = static_cast<std::size_t>(n);
  dim = static_cast<int>(d);
}

EmbeddingTable LoadText(std::istream &in, OovPolicy policy,
                        std::uint64_t seed) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::kFormat, "empty embedding file");
  }
  std::size_t count = 0;
  int dim = 0;
  ParseHeader(line, count, dim);
  EmbeddingTable table(dim, policy, seed);
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    Vector values(dim);
    int k = 0;
    std::string token;
    while (fields >> token) {
      if (k >= dim) {
        throw Error(ErrorKind::kFormat, "row for '" + word + "' has more than " +
                                            std::to_string(dim) + " values",
                    "", line_no);
      }
      char *end = nullptr;
      double v = std::strtod(token.c_str(), &end);
      if (end == token.c_str() || *end != '\0' || !std::isfinite(v)) {
        throw Error(ErrorKind::kFormat,
                    "bad or non-finite value '" + token + "'", "", line_no);
      }
      values(k++) = v;
    }
    if (k != dim) {
      throw Error(ErrorKind::kFormat,
                  "row for '" + word + "' has " + std::to_string(k) +
                      " values, expected " + std::to_string(dim),
                  "", line_no);
    }
    table.Add(word, values);
    ++rows;
  }
  if (rows != count) {
    throw Error(ErrorKind::kFormat, "header declares " + std::to_string(count) +
                                        " words, file has " +
                                        std::to_string(rows));
  }
  return table;
}

EmbeddingTable LoadBinary(std::istream &in, OovPolicy policy,
                          std::uint64_t seed) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::kFormat, "empty embedding file");
  }
  std::size_t count = 0;
  int dim = 0;
  ParseHeader(line, count, dim);
  EmbeddingTable table(dim, policy, seed);
  Vector values(dim);
  for (std::size_t r = 0; r < count; ++r) {
    std::string word;
    int c;
    while ((c = in.get()) != EOF && (c == '\n' || c == '\r')) {
    }
    while (c != EOF && c != ' ') {
      word.push_back(static_cast<char>(c));
      c = in.get();
    }
    if (c == EOF) {
      throw Error(ErrorKind::kFormat, "header declares " + std::to_string(count) +
                                          " words, file has " +
                                          std::to_string(r));
    }
    for (int k = 0; k < dim; ++k) {
      unsigned char bytes[4];
      if (!in.read(reinterpret_cast<char *>(bytes), 4)) {
        throw Error(ErrorKind::kFormat,
                    "row " + std::to_string(r + 1) + " ('" + word +
                        "') is shorter than " + std::to_string(dim) + " values");
      }
      std::uint32_t bits = static_cast<std::uint32_t>(bytes[0]) |
                           static_cast<std::uint32_t>(bytes[1]) << 8 |
                           static_cast<std::uint32_t>(bytes[2]) << 16 |
                           static_cast<std::uint32_t>(bytes[3]) << 24;
      float f = std::bit_cast<float>(bits);
      if (!std::isfinite(f)) {
        throw Error(ErrorKind::kFormat, "non-finite value in row for '" + word + "'");
      }
      values(k) = f;
    }
    table.Add(word, values);
  }
  return table;
}

}  // namespace

OovPolicy ParseOovPolicy(std::string_view name) {
  if (name == "zero") return OovPolicy::kZero;
  if (name == "hashed") return OovPolicy::kHashed;
  throw Error(ErrorKind::kConfig, "unknown OOV policy '" + std::string(name) + "'");
}

TableFormat ParseTableFormat(std::string_view name) {
  if (name == "text") return TableFormat::kText;
  if (name == "binary") return TableFormat::kBinary;
  throw Error(ErrorKind::kConfig,
              "unknown embedding format '" + std::string(name) + "'");
}

EmbeddingTable::EmbeddingTable(int dim, OovPolicy policy, std::uint64_t seed)
    : dim_(dim), policy_(policy), seed_(seed), pad_(Vector::Zero(dim)) {
  if (dim < 1) throw Error(ErrorKind::kConfig, "embedding dim must be >= 1");
}

EmbeddingTable EmbeddingTable::MakeHashed(int dim, std::uint64_t seed) {
  return EmbeddingTable(dim, OovPolicy::kHashed, seed);
}

EmbeddingTable EmbeddingTable::Load(std::istream &in, TableFormat format,
                                    OovPolicy policy, std::uint64_t seed) {
  return format == TableFormat::kText ? LoadText(in, policy, seed)
                                      : LoadBinary(in, policy, seed);
}

EmbeddingTable EmbeddingTable::LoadFile(const std::string &path,
                                        TableFormat format, OovPolicy policy,
                                        std::uint64_t seed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open embedding file " + path);
  try {
    return Load(in, format, policy, seed);
  } catch (const Error &e) {
    throw e.WithFile(path);
  }
}

bool EmbeddingTable::Add(const std::string &word, const Vector &values) {
  if (values.size() != dim_) {
    throw Error(ErrorKind::kFormat, "vector for '" + word + "' has dim " +
                                        std::to_string(values.size()));
  }
  if (!values.allFinite()) {
    throw Error(ErrorKind::kFormat, "non-finite vector for '" + word + "'");
  }
  auto [it, inserted] = index_.emplace(word, rows_.size());
  if (!inserted) {
    ++duplicates_;
    return false;
  }
  rows_.push_back(values);
  return true;
}

bool EmbeddingTable::Contains(std::string_view word) const {
  return index_.count(std::string(word)) > 0 ||
         index_.count(Lowercase(word)) > 0;
}

Vector EmbeddingTable::Lookup(std::string_view word) const {
  Vector out(dim_);
  LookupInto(word, out);
  return out;
}

void EmbeddingTable::LookupInto(std::string_view word,
                                Eigen::Ref<Vector> out) const {
  if (word == kPadToken) {
    out.setZero();
    return;
  }
  auto it = index_.find(std::string(word));
  if (it == index_.end()) it = index_.find(Lowercase(word));
  if (it != index_.end()) {
    out = rows_[it->second];
  } else if (policy_ == OovPolicy::kHashed) {
    HashedVector(word, out);
  } else {
    out.setZero();
  }
}

void EmbeddingTable::HashedVector(std::string_view word,
                                  Eigen::Ref<Vector> out) const {
  // SplitMix64 stream keyed by (word, seed), then Box-Muller pairs.
  std::uint64_t state = StableHash(word) ^ Mix64(seed_);
  auto next_uniform = [&state] {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = Mix64(state);
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
  };
  for (int k = 0; k < dim_; k += 2) {
    const double r = std::sqrt(-2.0 * std::log(next_uniform()));
    const double theta = 2.0 * M_PI * next_uniform();
    out(k) = r * std::cos(theta);
    if (k + 1 < dim_) out(k + 1) = r * std::sin(theta);
  }
}

}  // namespace vecevent::embed
