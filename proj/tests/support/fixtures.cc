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

#include "fixtures.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "vcc/encoders.h"

namespace vcc::testing {

std::vector<VoteLabel> Votes(int causal) {
  static const VoteLabel kOthers[] = {VoteLabel::kInference, VoteLabel::kTemporal,
                                      VoteLabel::kNone, VoteLabel::kOther};
  std::vector<VoteLabel> v;
  for (int i = 0; i < 5; ++i) {
    v.push_back(i < causal ? VoteLabel::kCausal : kOthers[i % 4]);
  }
  return v;
}

VideoRecord SyntheticVideo(const std::string &id, Split split,
                           const std::string &category, std::size_t events,
                           std::size_t pairs, std::size_t positives) {
  VideoRecord v;
  v.id = id;
  v.split = split;
  v.category = category;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < events; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "e%03zu", i);
    ids.push_back(buf);
  }
  std::vector<std::size_t> starts;
  for (std::size_t k = 0; k < pairs; ++k) {
    ImagePair p;
    p.id = "p" + std::to_string(k + 1);
    const std::size_t lo = k * events / pairs;
    const std::size_t hi = (k + 1) * events / pairs;
    starts.push_back(lo);
    for (std::size_t i = lo; i < hi; ++i) {
      p.events.push_back(Event::Make(ids[i], id + " event " + std::to_string(i)));
    }
    p.detections = {{"person", 0.9, 1}, {"ball", 0.5, 2}};
    v.pairs.push_back(std::move(p));
  }
  // Effects come from events that are no pair's cause.
  std::vector<std::size_t> effects;
  for (std::size_t i = 0; i < events; ++i) {
    bool is_cause = false;
    for (std::size_t s : starts) is_cause = is_cause || s == i;
    if (!is_cause) effects.push_back(i);
  }
  std::size_t next = 0;
  for (std::size_t j = 0; j < positives; ++j) {
    ImagePair &p = v.pairs[j % pairs];
    const int votes = j % 3 == 2 ? 4 : 5;
    p.candidates.push_back({p.events[0].id, ids[effects.at(next++)],
                            Votes(votes), Votes(3)});
  }
  ImagePair &first = v.pairs[0];
  first.candidates.push_back({first.events[0].id, ids[effects.at(next++)],
                              Votes(3), Votes(4)});
  first.candidates.push_back({first.events[0].id, ids[effects.at(next++)],
                              Votes(0), Votes(1)});
  Finalize(v);
  return v;
}

namespace {

// Appends `count` videos whose positives sum to `positives` and whose
// candidate lists have `base` entries except the first `longer` videos,
// which get one more.
void AddSplit(Dataset &out, Split split, std::size_t count,
              std::size_t positives, std::size_t base, std::size_t longer,
              bool longer_first) {
  static const char *kCategories[] = {"Sports", "Socializing", "Household",
                                      "Personal Care", "Eating"};
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t pos = positives / count + (i < positives % count ? 1 : 0);
    const bool is_longer = longer_first ? i < longer : i >= count - longer;
    const std::size_t candidates = base + (is_longer ? 1 : 0);
    char id[32];
    std::snprintf(id, sizeof(id), "%s-%03zu",
                  std::string(SplitName(split)).c_str(), i);
    out.push_back(SyntheticVideo(id, split, kCategories[i % 5], candidates + 1, 4, pos));
  }
}

}  // namespace

Dataset CorpusFixture() {
  Dataset d;
  // 640 x 32 + 160 x 31 = 31.8 per video.
  AddSplit(d, Split::kTrain, 800, 2599, 31, 640, true);
  // 90 x 32 + 10 x 33 = 32.1.
  AddSplit(d, Split::kDev, 100, 329, 32, 10, true);
  // 80 x 32 + 20 x 33 = 32.2.
  AddSplit(d, Split::kTest, 100, 282, 32, 20, false);
  return d;
}

VccParameters RandomParameters(Variant variant, std::size_t d, std::size_t h,
                               std::size_t tokens, std::size_t feature_width,
                               double scale, Rng &rng) {
  Vocabulary vocab;
  for (std::size_t i = 0; i < tokens; ++i) vocab.Add("w" + std::to_string(i));
  EmbeddingTable table = InitEmbeddingTable(std::move(vocab), d, rng);
  VccParameters p = InitParameters(variant, std::move(table), h, 10, feature_width, rng);
  for (ParameterSlot &slot : p.Slots()) {
    for (double &x : slot.tensor->data()) x = rng.Uniform(-scale, scale);
  }
  return p;
}

Event RandomEvent(const std::string &id, std::size_t tokens,
                  std::size_t max_tokens, Rng &rng) {
  const std::size_t n = 1 + rng.Below(max_tokens);
  std::string text;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) text += " ";
    text += "w" + std::to_string(rng.Below(tokens));
  }
  return Event::Make(id, text);
}

std::vector<std::string> RandomObjects(std::size_t tokens,
                                       std::size_t max_objects, Rng &rng) {
  const std::size_t n = rng.Below(max_objects + 1);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string w = "w" + std::to_string(rng.Below(tokens));
    if (rng.Bernoulli(0.3)) w += " w" + std::to_string(rng.Below(tokens));
    out.push_back(w);
  }
  return out;
}

std::filesystem::path TempDir(const std::string &name) {
  const auto dir = std::filesystem::temp_directory_path() / ("vcc-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string ReadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace vcc::testing
