// Copyright 2026 The VCC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vcc/encoders.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vcc/errors.h"
#include "vcc/text_util.h"

namespace vcc {

Vocabulary::Vocabulary() {
  Add(std::string(kUnkToken));
  Add(std::string(kPadToken));
}

std::size_t Vocabulary::Add(const std::string &token) {
  auto [it, inserted] = index_.emplace(token, tokens_.size());
  if (inserted) tokens_.push_back(token);
  return it->second;
}

std::size_t Vocabulary::Index(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

bool Vocabulary::Contains(std::string_view token) const {
  return index_.count(std::string(token)) > 0;
}

std::vector<std::size_t> Vocabulary::Indices(
    std::span<const std::string> tokens) const {
  std::vector<std::size_t> out;
  out.reserve(tokens.size());
  for (const std::string &t : tokens) out.push_back(Index(t));
  return out;
}

Vocabulary Vocabulary::FromTokens(std::vector<std::string> tokens) {
  if (tokens.size() < 2 || tokens[0] != kUnkToken || tokens[1] != kPadToken) {
    throw ValidationError("vocabulary must start with <unk> and <pad>");
  }
  Vocabulary vocab;
  for (std::size_t i = 2; i < tokens.size(); ++i) {
    if (vocab.Add(tokens[i]) != i) {
      throw ValidationError("duplicate vocabulary token '" + tokens[i] + "'");
    }
  }
  return vocab;
}

Vocabulary BuildVocabulary(std::span<const VideoRecord> records) {
  Vocabulary vocab;
  for (const VideoRecord &video : records) {
    if (video.split != Split::kTrain) continue;
    for (const ImagePair &pair : video.pairs) {
      for (const Event &e : pair.events) {
        for (const std::string &t : e.tokens) vocab.Add(t);
      }
      for (const Detection &d : pair.detections) {
        for (const std::string &t : Tokenize(d.word)) vocab.Add(t);
      }
    }
  }
  return vocab;
}

EmbeddingTable InitEmbeddingTable(Vocabulary vocab, std::size_t width,
                                  Rng &rng) {
  if (width == 0) throw DomainError("embedding width must be positive");
  Tensor matrix(Shape{vocab.size(), width});
  for (double &v : matrix.data()) v = rng.Uniform(-0.1, 0.1);
  return EmbeddingTable{std::move(vocab), std::move(matrix), true};
}

Tensor EncodeEvent(const Event &event, const EmbeddingTable &table) {
  if (event.tokens.empty()) {
    throw DomainError("cannot encode event '" + event.id + "' without tokens");
  }
  const std::size_t d = table.width();
  Tensor out(Shape{event.tokens.size(), d});
  for (std::size_t i = 0; i < event.tokens.size(); ++i) {
    auto src = table.matrix.row(table.vocab.Index(event.tokens[i]));
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Tensor EncodeObject(std::string_view word, const EmbeddingTable &table) {
  const auto tokens = Tokenize(word);
  Tensor out = Tensor::Zeros(table.width());
  if (tokens.empty()) {
    throw DomainError("cannot encode an empty object word");
  }
  for (const std::string &t : tokens) {
    auto src = table.matrix.row(table.vocab.Index(t));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += src[k];
  }
  const double scale = 1.0 / static_cast<double>(tokens.size());
  for (double &v : out.data()) v *= scale;
  return out;
}

std::vector<Detection> SelectObjects(std::span<const Detection> detections,
                                     std::size_t m) {
  if (m == 0) throw DomainError("object budget m must be at least 1");
  std::vector<Detection> sorted(detections.begin(), detections.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Detection &a, const Detection &b) {
                     if (a.confidence != b.confidence) {
                       return a.confidence > b.confidence;
                     }
                     if (a.source != b.source) return a.source < b.source;
                     return a.word < b.word;
                   });
  std::vector<Detection> out;
  std::vector<std::string> seen;
  for (Detection &d : sorted) {
    if (out.size() == m) break;
    std::string key = Join(Tokenize(d.word), " ");
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(std::move(key));
    out.push_back(std::move(d));
  }
  return out;
}

EmbeddingTable LoadEmbeddingFile(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw LookupError("cannot open embedding file " + path.string());
  Vocabulary vocab;
  std::vector<double> values;
  std::size_t width = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    std::vector<double> row;
    std::string number;
    while (fields >> number) {
      double v = 0.0;
      auto [ptr, ec] =
          std::from_chars(number.data(), number.data() + number.size(), v);
      if (ec != std::errc() || ptr != number.data() + number.size() ||
          !std::isfinite(v)) {
        throw ParseError("bad number '" + number + "'", line_no);
      }
      row.push_back(v);
    }
    if (row.empty()) throw ParseError("token without a vector", line_no);
    if (width == 0) {
      width = row.size();
      values.assign(2 * width, 0.0);  // UNK, PAD
    } else if (row.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " values, got " +
                           std::to_string(row.size()),
                       line_no);
    }
    if (vocab.Contains(token)) {
      throw ParseError("duplicate token '" + token + "'", line_no);
    }
    vocab.Add(token);
    values.insert(values.end(), row.begin(), row.end());
  }
  if (width == 0) throw ParseError("no vectors in " + path.string(), 0);
  const std::size_t rows = vocab.size();
  return EmbeddingTable{std::move(vocab),
                        Tensor::Matrix(rows, width, std::move(values)), false};
}

}  // namespace vcc
