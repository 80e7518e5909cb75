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

#include "vcc/synthetic.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "vcc/model.h"
#include "vcc/errors.h"
#include "vcc/rng.h"
#include "vcc/text_util.h"

namespace vcc {
namespace {

constexpr std::array<std::string_view, 5> kCategories = {
    "Sports", "Socializing", "Household", "Personal Care", "Eating"};

constexpr std::array<std::string_view, 16> kSyllables = {
    "ba", "ko", "ri", "mu", "te", "sa", "lo", "ve",
    "ni", "du", "fe", "go", "pi", "ra", "zu", "che"};

// Disjoint index ranges keep the word families apart.
constexpr std::size_t kCauseVerbBase = 0;
constexpr std::size_t kCauseNounBase = 400;
constexpr std::size_t kEffectBase = 800;
constexpr std::size_t kDistractorBase = 1600;
constexpr std::size_t kObjectBase = 2400;
constexpr std::size_t kMaxRules = 300;

// Three-syllable pseudo-word for index i (unique for i < 4096).
std::string Word(std::size_t i) {
  std::string w;
  w += kSyllables[i % 16];
  w += kSyllables[(i / 16) % 16];
  w += kSyllables[(i / 256) % 16];
  return w;
}

std::string CauseText(std::size_t g) {
  return "a person " + Word(kCauseVerbBase + g) + " the " +
         Word(kCauseNounBase + g);
}

std::string EffectText(std::size_t r) {
  return "the " + Word(kEffectBase + 2 * r) + " " +
         Word(kEffectBase + 2 * r + 1);
}

std::string DistractorText(std::size_t t) {
  return "someone " + Word(kDistractorBase + 2 * t) + " " +
         Word(kDistractorBase + 2 * t + 1);
}

std::string ObjectWord(std::size_t i) {
  std::string w = Word(kObjectBase + 2 * i);
  if (i % 3 == 2) w += " " + Word(kObjectBase + 2 * i + 1);
  return w;
}

using V = VoteLabel;
const std::vector<VoteLabel> kAllCausal = {V::kCausal, V::kCausal, V::kCausal,
                                           V::kCausal, V::kCausal};
const std::vector<VoteLabel> kTwoCausal = {V::kCausal, V::kCausal,
                                           V::kInference, V::kTemporal,
                                           V::kNone};
const std::vector<VoteLabel> kNoCausal = {V::kInference, V::kTemporal,
                                          V::kNone, V::kNone, V::kOther};

// Unit of content for one image pair: a contextual sibling group or a plain
// rule index.
struct Slot {
  bool contextual;
  std::size_t index;
};

std::size_t ContextualRuleCount(const SyntheticConfig &c) {
  const double groups = std::round(c.contextual_fraction *
                                   static_cast<double>(c.rules) / 2.0);
  return std::min(2 * static_cast<std::size_t>(groups), c.rules - c.rules % 2);
}

template <typename T>
T ParseNumber(const std::string &key, const std::string &value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("bad value '" + value + "' for " + key);
  }
  return out;
}

}  // namespace

void SyntheticConfig::Validate() const {
  if (!(contextual_fraction >= 0.0 && contextual_fraction <= 1.0)) {
    throw ConfigError("contextual_fraction must lie in [0, 1]");
  }
  if (!(detection_noise >= 0.0 && detection_noise <= 1.0)) {
    throw ConfigError("detection_noise must lie in [0, 1]");
  }
  if (rules == 0) throw ConfigError("at least one rule is required");
  if (rules > kMaxRules) {
    throw ConfigError("at most " + std::to_string(kMaxRules) +
                      " rules fit the generated vocabulary");
  }
  if (pairs_per_video == 0) throw ConfigError("pairs_per_video must be >= 1");
  const std::size_t contextual = ContextualRuleCount(*this);
  const std::size_t slots = contextual / 2 + (rules - contextual);
  if (pairs_per_video > slots) {
    throw ConfigError("pairs_per_video (" + std::to_string(pairs_per_video) +
                      ") exceeds the " + std::to_string(slots) +
                      " distinct causes the rules provide");
  }
  if (distractors_per_pair * pairs_per_video > distractor_templates) {
    throw ConfigError("distractor_templates too small for " +
                      std::to_string(distractors_per_pair) + " x " +
                      std::to_string(pairs_per_video) + " distinct distractors");
  }
  if (distractor_templates > 400) {
    throw ConfigError("at most 400 distractor templates are available");
  }
  if (detection_noise > 0.0 && junk_objects < kDefaultObjects) {
    throw ConfigError("detection_noise needs at least " +
                      std::to_string(kDefaultObjects) + " junk_objects");
  }
  if (junk_per_pair > junk_objects) {
    throw ConfigError("junk_per_pair exceeds junk_objects");
  }
  if (junk_objects + rules > 800) {
    throw ConfigError("object vocabulary exceeds the generated word space");
  }
}

SyntheticConfig ParseSyntheticConfig(std::istream &in) {
  SyntheticConfig c;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string key = Trim(std::string_view(trimmed).substr(0, eq));
    const std::string value = Trim(std::string_view(trimmed).substr(eq + 1));
    if (key == "train_videos") c.train_videos = ParseNumber<std::size_t>(key, value);
    else if (key == "dev_videos") c.dev_videos = ParseNumber<std::size_t>(key, value);
    else if (key == "test_videos") c.test_videos = ParseNumber<std::size_t>(key, value);
    else if (key == "pairs_per_video") c.pairs_per_video = ParseNumber<std::size_t>(key, value);
    else if (key == "distractors_per_pair") c.distractors_per_pair = ParseNumber<std::size_t>(key, value);
    else if (key == "rules") c.rules = ParseNumber<std::size_t>(key, value);
    else if (key == "contextual_fraction") c.contextual_fraction = ParseNumber<double>(key, value);
    else if (key == "detection_noise") c.detection_noise = ParseNumber<double>(key, value);
    else if (key == "junk_objects") c.junk_objects = ParseNumber<std::size_t>(key, value);
    else if (key == "junk_per_pair") c.junk_per_pair = ParseNumber<std::size_t>(key, value);
    else if (key == "distractor_templates") c.distractor_templates = ParseNumber<std::size_t>(key, value);
    else if (key == "feature_width") c.feature_width = ParseNumber<std::size_t>(key, value);
    else if (key == "seed") c.seed = ParseNumber<std::uint64_t>(key, value);
    else throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  return c;
}

SyntheticConfig LoadSyntheticConfig(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw LookupError("cannot open config " + path.string());
  return ParseSyntheticConfig(in);
}

std::string FormatSyntheticConfig(const SyntheticConfig &c) {
  std::ostringstream out;
  out.precision(17);
  out << "train_videos = " << c.train_videos << "\n"
      << "dev_videos = " << c.dev_videos << "\n"
      << "test_videos = " << c.test_videos << "\n"
      << "pairs_per_video = " << c.pairs_per_video << "\n"
      << "distractors_per_pair = " << c.distractors_per_pair << "\n"
      << "rules = " << c.rules << "\n"
      << "contextual_fraction = " << c.contextual_fraction << "\n"
      << "detection_noise = " << c.detection_noise << "\n"
      << "junk_objects = " << c.junk_objects << "\n"
      << "junk_per_pair = " << c.junk_per_pair << "\n"
      << "distractor_templates = " << c.distractor_templates << "\n"
      << "feature_width = " << c.feature_width << "\n"
      << "seed = " << c.seed << "\n";
  return out.str();
}

std::vector<CausalRule> MakeRules(const SyntheticConfig &config) {
  config.Validate();
  const std::size_t contextual = ContextualRuleCount(config);
  std::vector<CausalRule> rules;
  for (std::size_t r = 0; r < contextual; ++r) {
    rules.push_back({CauseText(r / 2), EffectText(r), ObjectWord(r)});
  }
  const std::size_t groups = contextual / 2;
  for (std::size_t r = contextual; r < config.rules; ++r) {
    rules.push_back({CauseText(groups + (r - contextual)), EffectText(r),
                     std::nullopt});
  }
  return rules;
}

std::vector<std::string> ObjectVocabulary(const SyntheticConfig &config) {
  std::vector<std::string> words;
  for (const CausalRule &r : MakeRules(config)) {
    if (r.required_object) words.push_back(*r.required_object);
  }
  for (std::size_t j = 0; j < config.junk_objects; ++j) {
    words.push_back(ObjectWord(config.rules + j));
  }
  return words;
}

Dataset Generate(const SyntheticConfig &config) {
  config.Validate();
  const std::vector<CausalRule> rules = MakeRules(config);
  const std::size_t contextual = ContextualRuleCount(config);
  const std::size_t groups = contextual / 2;
  std::vector<std::string> junk;
  for (std::size_t j = 0; j < config.junk_objects; ++j) {
    junk.push_back(ObjectWord(config.rules + j));
  }

  Rng rng(config.seed);

  // Fixed random direction per object word stands in for a global image
  // embedding.
  std::map<std::string, std::vector<double>> directions;
  if (config.feature_width > 0) {
    Rng feature_rng = rng.Fork();
    for (const std::string &w : ObjectVocabulary(config)) {
      std::vector<double> dir(config.feature_width);
      for (double &x : dir) x = feature_rng.Uniform(-1.0, 1.0);
      directions[w] = std::move(dir);
    }
  }

  std::vector<Slot> slots;
  for (std::size_t g = 0; g < groups; ++g) slots.push_back({true, g});
  for (std::size_t r = contextual; r < rules.size(); ++r) {
    slots.push_back({false, r});
  }

  Dataset records;
  const std::array<std::pair<Split, std::size_t>, 3> plan = {
      std::pair{Split::kTrain, config.train_videos},
      std::pair{Split::kDev, config.dev_videos},
      std::pair{Split::kTest, config.test_videos}};
  std::size_t video_counter = 0;
  for (const auto &[split, count] : plan) {
    // Alternating sibling choice keeps gated/contrast counts balanced.
    std::vector<std::size_t> branch_counter(groups, 0);
    for (std::size_t v = 0; v < count; ++v, ++video_counter) {
      VideoRecord video;
      char id[32];
      std::snprintf(id, sizeof(id), "%s-%05zu",
                    std::string(SplitName(split)).c_str(), v);
      video.id = id;
      video.category = std::string(kCategories[video_counter % kCategories.size()]);
      video.split = split;

      std::vector<Slot> chosen = slots;
      rng.Shuffle(chosen);
      chosen.resize(config.pairs_per_video);
      std::vector<std::size_t> distractors(config.distractor_templates);
      for (std::size_t t = 0; t < distractors.size(); ++t) distractors[t] = t;
      rng.Shuffle(distractors);
      std::size_t next_distractor = 0;
      std::size_t next_event = 0;

      for (std::size_t k = 0; k < chosen.size(); ++k) {
        const Slot &slot = chosen[k];
        ImagePair pair;
        pair.id = "p" + std::to_string(k + 1);

        std::string cause_text;
        std::string gold_text;
        std::string contrast_text;
        std::optional<std::string> object;
        if (slot.contextual) {
          const std::size_t branch = branch_counter[slot.index]++ % 2;
          const CausalRule &own = rules[2 * slot.index + branch];
          const CausalRule &sibling = rules[2 * slot.index + 1 - branch];
          cause_text = own.cause;
          gold_text = own.effect;
          contrast_text = sibling.effect;
          object = own.required_object;
        } else {
          cause_text = rules[slot.index].cause;
          gold_text = rules[slot.index].effect;
        }

        std::vector<std::string> texts = {cause_text, gold_text};
        if (!contrast_text.empty()) texts.push_back(contrast_text);
        for (std::size_t j = 0; j < config.distractors_per_pair; ++j) {
          texts.push_back(DistractorText(distractors[next_distractor++]));
        }
        // Random id order so id tie-breaking favours no role.
        std::vector<std::size_t> order(texts.size());
        for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
        rng.Shuffle(order);
        std::vector<std::string> ids(texts.size());
        for (std::size_t j : order) {
          char eid[16];
          std::snprintf(eid, sizeof(eid), "e%03zu", next_event++);
          ids[j] = eid;
        }
        for (std::size_t j = 0; j < texts.size(); ++j) {
          pair.events.push_back(Event::Make(ids[j], texts[j]));
        }

        std::vector<std::string> junk_words = junk;
        rng.Shuffle(junk_words);
        const bool noisy = object && rng.Bernoulli(config.detection_noise);
        if (object) {
          const double conf = noisy ? rng.Uniform(0.05, 0.3) : rng.Uniform(0.6, 1.0);
          pair.detections.push_back(
              {*object, conf, static_cast<int>(1 + rng.Below(2))});
        }
        for (std::size_t j = 0; j < config.junk_per_pair; ++j) {
          pair.detections.push_back({junk_words[j], rng.Uniform(0.05, 0.95),
                                     static_cast<int>(1 + rng.Below(2))});
        }
        if (noisy) {
          // Enough confident junk to push the required object out of the
          // default top-10 selection.
          for (std::size_t j = 0; j < kDefaultObjects; ++j) {
            pair.detections.push_back({junk_words[j], rng.Uniform(0.9, 1.0),
                                       static_cast<int>(1 + rng.Below(2))});
          }
        }

        if (config.feature_width > 0) {
          std::vector<double> feature(config.feature_width, 0.0);
          for (const Detection &d : pair.detections) {
            const auto &dir = directions.at(d.word);
            for (std::size_t f = 0; f < feature.size(); ++f) {
              feature[f] += d.confidence * dir[f];
            }
          }
          const double scale = 1.0 / static_cast<double>(pair.detections.size());
          for (double &f : feature) f = f * scale + rng.Uniform(-0.05, 0.05);
          pair.image_feature = std::move(feature);
        }

        const std::string &cause_id = ids[0];
        pair.candidates.push_back(
            {cause_id, ids[1], kAllCausal, slot.contextual ? kTwoCausal : kAllCausal});
        std::size_t j = 2;
        if (!contrast_text.empty()) {
          pair.candidates.push_back({cause_id, ids[2], kNoCausal, kTwoCausal});
          j = 3;
        }
        for (; j < ids.size(); ++j) {
          pair.candidates.push_back({cause_id, ids[j], kNoCausal, kNoCausal});
        }
        video.pairs.push_back(std::move(pair));
      }
      Finalize(video);
      records.push_back(std::move(video));
    }
  }
  return records;
}

DatasetStats Describe(std::span<const VideoRecord> records) {
  return ComputeStats(records);
}

bool RuleHolds(std::span<const CausalRule> rules, const std::string &cause,
               const std::string &effect,
               std::span<const Detection> detections) {
  for (const CausalRule &r : rules) {
    if (r.cause != cause || r.effect != effect) continue;
    if (!r.required_object) return true;
    for (const Detection &d : detections) {
      if (d.word == *r.required_object) return true;
    }
  }
  return false;
}

bool RuleIsContextual(std::span<const CausalRule> rules,
                      const std::string &cause, const std::string &effect) {
  for (const CausalRule &r : rules) {
    if (r.cause == cause && r.effect == effect && r.required_object) return true;
  }
  return false;
}

}  // namespace vcc
