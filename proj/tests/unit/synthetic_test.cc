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

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "vcc/analysis.h"
#include "vcc/errors.h"
#include "vcc/model.h"
#include "vcc/synthetic.h"

namespace vcc {
namespace {

SyntheticConfig Small(double rho = 1.0) {
  SyntheticConfig c;
  c.train_videos = 40;
  c.dev_videos = 6;
  c.test_videos = 6;
  c.contextual_fraction = rho;
  c.seed = 11;
  return c;
}

std::string Bytes(const Dataset &d) {
  std::ostringstream out;
  WriteDataset(out, d);
  return out.str();
}

TEST_CASE("generation is deterministic in the seed") {
  const SyntheticConfig c = Small();
  CHECK(Bytes(Generate(c)) == Bytes(Generate(c)));
  SyntheticConfig other = c;
  other.seed = 12;
  CHECK(Bytes(Generate(other)) != Bytes(Generate(c)));
  // The written file parses back to the same bytes.
  std::istringstream in(Bytes(Generate(c)));
  CHECK(Bytes(ParseDataset(in)) == Bytes(Generate(c)));
}

TEST_CASE("rule sets") {
  const auto full = MakeRules(Small(1.0));
  CHECK(full.size() == 12);
  for (std::size_t r = 0; r < full.size(); r += 2) {
    CHECK(full[r].required_object.has_value());
    CHECK(full[r].cause == full[r + 1].cause);
    CHECK(full[r].effect != full[r + 1].effect);
    CHECK(*full[r].required_object != *full[r + 1].required_object);
  }
  const auto half = MakeRules(Small(0.5));
  std::size_t gated = 0;
  for (const auto &r : half) gated += r.required_object.has_value();
  CHECK(gated == 6);
  for (const auto &r : MakeRules(Small(0.0))) CHECK_FALSE(r.required_object.has_value());

  const auto vocab = ObjectVocabulary(Small(1.0));
  CHECK(vocab.size() == 12 + 16);
  for (const auto &r : full) {
    CHECK(std::find(vocab.begin(), vocab.end(), *r.required_object) != vocab.end());
  }
}

TEST_CASE("labels follow the rules") {
  for (double rho : {0.0, 0.5, 1.0}) {
    for (double noise : {0.0, 0.3}) {
      SyntheticConfig c = Small(rho);
      c.detection_noise = noise;
      const auto rules = MakeRules(c);
      for (const auto &v : Generate(c)) {
        for (const auto &p : v.pairs) {
          for (const auto &cand : p.candidates) {
            const std::string &cause = v.FindEvent(cand.cause)->text;
            const std::string &effect = v.FindEvent(cand.effect)->text;
            CHECK(IsPositive(cand) == RuleHolds(rules, cause, effect, p.detections));
          }
        }
      }
    }
  }
}

TEST_CASE("every gated positive has exactly one contrast negative") {
  for (double rho : {0.5, 1.0}) {
    const SyntheticConfig c = Small(rho);
    const auto rules = MakeRules(c);
    std::size_t gated = 0, contrast = 0;
    for (const auto &v : Generate(c)) {
      for (const auto &p : v.pairs) {
        std::size_t pair_gated = 0, pair_contrast = 0;
        for (const auto &cand : p.candidates) {
          const std::string &cause = v.FindEvent(cand.cause)->text;
          const std::string &effect = v.FindEvent(cand.effect)->text;
          if (!RuleIsContextual(rules, cause, effect)) continue;
          if (IsPositive(cand)) {
            ++pair_gated;
          } else {
            ++pair_contrast;
          }
        }
        CHECK(pair_gated == pair_contrast);
        gated += pair_gated;
        contrast += pair_contrast;
      }
    }
    CHECK(gated > 0);
    CHECK(gated == contrast);
  }
}

TEST_CASE("no contrast without contextual rules") {
  const SyntheticConfig c = Small(0.0);
  const auto rules = MakeRules(c);
  for (const auto &v : Generate(c)) {
    for (const auto &p : v.pairs) {
      std::size_t positives = 0;
      for (const auto &cand : p.candidates) {
        positives += IsPositive(cand);
        CHECK_FALSE(RuleIsContextual(rules, v.FindEvent(cand.cause)->text,
                                     v.FindEvent(cand.effect)->text));
        // Without context the votes agree with the label.
        CHECK(IsPositive(cand) == (CausalVotes(cand.votes_noctx) >= 4));
      }
      CHECK(positives == 1);
    }
  }
}

TEST_CASE("describe arithmetic") {
  const SyntheticConfig c = Small(1.0);
  const DatasetStats s = Describe(Generate(c));
  const SplitStats &train = s.splits.at(Split::kTrain);
  CHECK(train.videos == 40);
  CHECK(train.pairs == 40 * 4);
  CHECK(train.images == 40 * 5);
  CHECK(train.positives == 40 * 4);
  // Per pair: cause, gold, contrast and three distractors; minus the query.
  CHECK(train.mean_candidates == 4 * 6 - 1);
  CHECK(s.splits.at(Split::kTest).videos == 6);

  const DatasetStats plain = Describe(Generate(Small(0.0)));
  CHECK(plain.splits.at(Split::kDev).mean_candidates == 4 * 5 - 1);
}

TEST_CASE("detection noise hides the required object") {
  SyntheticConfig c = Small(1.0);
  c.detection_noise = 1.0;
  const auto rules = MakeRules(c);
  for (const auto &v : Generate(c)) {
    for (const auto &p : v.pairs) {
      const PairContext ctx = MakeContext(p, kDefaultObjects);
      for (const auto &r : rules) {
        CHECK(std::find(ctx.objects.begin(), ctx.objects.end(), *r.required_object) ==
              ctx.objects.end());
      }
    }
  }
  c.detection_noise = 0.0;
  std::size_t visible = 0, pairs = 0;
  for (const auto &v : Generate(c)) {
    for (const auto &p : v.pairs) {
      const PairContext ctx = MakeContext(p, kDefaultObjects);
      ++pairs;
      for (const auto &r : rules) {
        visible += std::find(ctx.objects.begin(), ctx.objects.end(), *r.required_object) !=
                   ctx.objects.end();
      }
    }
  }
  CHECK(visible == pairs);
}

TEST_CASE("image features") {
  SyntheticConfig c = Small();
  for (const auto &v : Generate(c)) {
    for (const auto &p : v.pairs) {
      REQUIRE(p.image_feature.has_value());
      CHECK(p.image_feature->size() == 16);
    }
  }
  c.feature_width = 0;
  for (const auto &v : Generate(c)) {
    for (const auto &p : v.pairs) CHECK_FALSE(p.image_feature.has_value());
  }
}

TEST_CASE("config text round trip") {
  SyntheticConfig c = Small(0.25);
  c.detection_noise = 0.125;
  c.junk_objects = 20;
  c.seed = 123456789012345ULL;
  std::istringstream in(FormatSyntheticConfig(c));
  const SyntheticConfig back = ParseSyntheticConfig(in);
  CHECK(FormatSyntheticConfig(back) == FormatSyntheticConfig(c));
  CHECK(back.seed == c.seed);
  CHECK(back.contextual_fraction == 0.25);

  std::istringstream partial("# comment\n\nrules = 8\nseed=5\n");
  const SyntheticConfig p = ParseSyntheticConfig(partial);
  CHECK(p.rules == 8);
  CHECK(p.seed == 5);
  CHECK(p.train_videos == SyntheticConfig{}.train_videos);

  std::istringstream unknown("colour = red\n");
  CHECK_THROWS_AS(ParseSyntheticConfig(unknown), ConfigError);
  std::istringstream bad("rules = many\n");
  CHECK_THROWS_AS(ParseSyntheticConfig(bad), ConfigError);
  std::istringstream no_eq("rules 8\n");
  CHECK_THROWS_AS(ParseSyntheticConfig(no_eq), ConfigError);
}

TEST_CASE("infeasible configs") {
  auto bad = [](auto mutate) {
    SyntheticConfig c;
    mutate(c);
    CHECK_THROWS_AS(c.Validate(), ConfigError);
    CHECK_THROWS_AS(Generate(c), ConfigError);
  };
  bad([](SyntheticConfig &c) { c.contextual_fraction = 1.5; });
  bad([](SyntheticConfig &c) { c.contextual_fraction = -0.1; });
  bad([](SyntheticConfig &c) { c.detection_noise = 2; });
  bad([](SyntheticConfig &c) { c.rules = 0; });
  bad([](SyntheticConfig &c) { c.rules = 2; });  // one cause, four pairs
  bad([](SyntheticConfig &c) { c.pairs_per_video = 0; });
  bad([](SyntheticConfig &c) { c.junk_per_pair = 17; });
  bad([](SyntheticConfig &c) { c.distractor_templates = 5; });
  CHECK_NOTHROW(SyntheticConfig{}.Validate());
}

}  // namespace
}  // namespace vcc
