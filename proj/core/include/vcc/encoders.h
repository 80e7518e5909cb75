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

#ifndef VCC_ENCODERS_H_
#define VCC_ENCODERS_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vcc/dataset.h"
#include "vcc/rng.h"
#include "vcc/tensor.h"

namespace vcc {

// Token to row index. UNK and PAD occupy rows 0 and 1.
class Vocabulary {
 public:
  static constexpr std::size_t kUnk = 0;
  static constexpr std::size_t kPad = 1;
  static constexpr std::string_view kUnkToken = "<unk>";
  static constexpr std::string_view kPadToken = "<pad>";

  Vocabulary();

  // Returns the index of `token`, adding it if new.
  std::size_t Add(const std::string &token);
  // Index of `token`, or kUnk when absent.
  std::size_t Index(std::string_view token) const;
  bool Contains(std::string_view token) const;
  const std::string &Token(std::size_t index) const { return tokens_[index]; }
  const std::vector<std::string> &tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }

  // Indices for a token sequence; OOV tokens map to kUnk.
  std::vector<std::size_t> Indices(std::span<const std::string> tokens) const;

  // Rebuilds a vocabulary from its token list (e.g. from a checkpoint). The
  // list must start with the two special tokens and hold no duplicates.
  static Vocabulary FromTokens(std::vector<std::string> tokens);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Every event token and object-word token of the train split, in order of
// first occurrence (pair events before pair detections).
Vocabulary BuildVocabulary(std::span<const VideoRecord> records);

// |V| x d matrix shared by event tokens and object words.
struct EmbeddingTable {
  Vocabulary vocab;
  Tensor matrix;
  bool trainable = true;

  std::size_t width() const { return matrix.cols(); }
};

// Rows drawn uniformly from [-0.1, 0.1].
EmbeddingTable InitEmbeddingTable(Vocabulary vocab, std::size_t width,
                                  Rng &rng);

// n x d matrix whose row i embeds token i of the event.
Tensor EncodeEvent(const Event &event, const EmbeddingTable &table);

// Mean embedding of the whitespace tokens of an object word.
Tensor EncodeObject(std::string_view word, const EmbeddingTable &table);

// Merges detections of both images, orders them by confidence (ties: image 1
// first, then word), drops repeated words and keeps the first `m`.
std::vector<Detection> SelectObjects(std::span<const Detection> detections,
                                     std::size_t m);

// Frozen table from a text file of "token v1 ... vd" lines. UNK and PAD are
// prepended as zero rows; tokens absent from the file therefore embed to 0.
EmbeddingTable LoadEmbeddingFile(const std::filesystem::path &path);

}  // namespace vcc

#endif  // VCC_ENCODERS_H_
