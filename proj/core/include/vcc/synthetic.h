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

#ifndef VCC_SYNTHETIC_H_
#define VCC_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vcc/dataset.h"

namespace vcc {

// A planted causal rule. With a required object the relation only holds in
// image pairs where that object is detected.
struct CausalRule {
  std::string cause;
  std::string effect;
  std::optional<std::string> required_object;
};

// Generator settings. Read from "key = value" text (see ParseSyntheticConfig).
//
// Contextual rules come in sibling pairs sharing a cause text and differing
// in effect and required object. A pair showing one sibling's object is a
// positive for that sibling and, with identical texts, a contrast negative
// for the other, so every gated positive has exactly one contrast partner.
struct SyntheticConfig {
  std::size_t train_videos = 500;
  std::size_t dev_videos = 50;
  std::size_t test_videos = 50;
  std::size_t pairs_per_video = 4;
  std::size_t distractors_per_pair = 3;
  std::size_t rules = 12;
  double contextual_fraction = 1.0;  // rho
  double detection_noise = 0.0;
  std::size_t junk_objects = 16;       // object vocabulary outside the rules
  std::size_t junk_per_pair = 4;       // junk detections per pair
  std::size_t distractor_templates = 60;
  std::size_t feature_width = 16;      // 0 disables image features
  std::uint64_t seed = 1;

  // Throws ConfigError when the settings cannot be realized.
  void Validate() const;
};

SyntheticConfig ParseSyntheticConfig(std::istream &in);
SyntheticConfig LoadSyntheticConfig(const std::filesystem::path &path);
// Inverse of ParseSyntheticConfig.
std::string FormatSyntheticConfig(const SyntheticConfig &config);

// Rule set implied by the config: round(rho * rules / 2) sibling groups of
// contextual rules followed by context-free rules.
std::vector<CausalRule> MakeRules(const SyntheticConfig &config);

// Object vocabulary: every required object, then the junk objects.
std::vector<std::string> ObjectVocabulary(const SyntheticConfig &config);

Dataset Generate(const SyntheticConfig &config);

// Per-split corpus statistics of a dataset.
DatasetStats Describe(std::span<const VideoRecord> records);

// Relation implied by the rules for a (cause, effect) text pair under a set
// of detections: positive iff a rule matches the texts and its object (if
// any) is detected. Used to re-derive labels independently of generation.
bool RuleHolds(std::span<const CausalRule> rules, const std::string &cause,
               const std::string &effect,
               std::span<const Detection> detections);
// Whether some contextual rule matches the texts (context decides).
bool RuleIsContextual(std::span<const CausalRule> rules,
                      const std::string &cause, const std::string &effect);

}  // namespace vcc

#endif  // VCC_SYNTHETIC_H_
