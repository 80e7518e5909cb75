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
#include <cstring>
#include <limits>

#include "doctest.h"
#include "fixtures.h"
#include "json.hpp"
#include "vcc/checkpoint.h"
#include "vcc/errors.h"

namespace vcc {
namespace {

using testing::RandomParameters;

bool BitEqual(const VccParameters &a, const VccParameters &b) {
  const auto sa = a.Slots();
  const auto sb = b.Slots();
  if (sa.size() != sb.size()) return false;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (sa[i].first != sb[i].first) return false;
    if (sa[i].second->shape() != sb[i].second->shape()) return false;
    const auto x = sa[i].second->data();
    const auto y = sb[i].second->data();
    if (std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) != 0) return false;
  }
  return true;
}

TEST_CASE("round trip is bit exact for every variant") {
  Rng rng(41);
  for (Variant v : {Variant::kVcc, Variant::kNoContext, Variant::kNoAttention,
                    Variant::kFeatureContext}) {
    VccParameters p = RandomParameters(v, 3, 4, 7, v == Variant::kFeatureContext ? 5 : 0, 1.0, rng);
    // Awkward values: subnormals, extremes, negative zero, thirds.
    p.nn_c.w1.data()[0] = std::numeric_limits<double>::denorm_min();
    p.nn_c.w1.data()[1] = std::numeric_limits<double>::max();
    p.nn_c.w1.data()[2] = -0.0;
    p.nn_c.w1.data()[3] = 1.0 / 3.0;
    p.embedding.trainable = v != Variant::kNoAttention;
    p.max_objects = 7;
    const std::string text = SerializeCheckpoint(p);
    const VccParameters back = DeserializeCheckpoint(text);
    CHECK(BitEqual(p, back));
    CHECK(std::signbit(back.nn_c.w1.data()[2]));
    CHECK(back.variant == v);
    CHECK(back.hidden == 4);
    CHECK(back.max_objects == 7);
    CHECK(back.feature_width == p.feature_width);
    CHECK(back.embedding.trainable == p.embedding.trainable);
    CHECK(back.embedding.vocab.size() == p.embedding.vocab.size());
    CHECK(SerializeCheckpoint(back) == text);
  }
}

TEST_CASE("file round trip") {
  Rng rng(42);
  const VccParameters p = RandomParameters(Variant::kVcc, 2, 2, 4, 0, 1.0, rng);
  const auto dir = testing::TempDir("checkpoint_test");
  SaveCheckpoint(dir / "m.json", p);
  CHECK(BitEqual(LoadCheckpoint(dir / "m.json"), p));
  CHECK_THROWS_AS(LoadCheckpoint(dir / "missing.json"), LookupError);
}

TEST_CASE("document fields") {
  Rng rng(43);
  const VccParameters p = RandomParameters(Variant::kVcc, 2, 3, 4, 0, 1.0, rng);
  const auto j = nlohmann::json::parse(SerializeCheckpoint(p));
  CHECK(j["format_version"] == kCheckpointFormatVersion);
  CHECK(j["variant"] == "vcc");
  CHECK(j["d"] == 2);
  CHECK(j["h"] == 3);
  for (const char *key : {"m", "feature_width", "embedding_trainable", "vocabulary"}) CHECK(j.contains(key));
}

TEST_CASE("bad documents") {
  Rng rng(44);
  const VccParameters p = RandomParameters(Variant::kVcc, 2, 2, 4, 0, 1.0, rng);
  auto j = nlohmann::json::parse(SerializeCheckpoint(p));
  CHECK_THROWS_AS(DeserializeCheckpoint("{not json"), ParseError);

  auto version = j;
  version["format_version"] = 99;
  CHECK_THROWS_AS(DeserializeCheckpoint(version.dump()), ValidationError);

  auto variant = j;
  variant["variant"] = "no-context";  // nn_a/nn_b tensors become unexpected
  CHECK_THROWS_AS(DeserializeCheckpoint(variant.dump()), Error);

  auto width = j;
  width["d"] = 5;
  CHECK_THROWS_AS(DeserializeCheckpoint(width.dump()), ValidationError);
}

}  // namespace
}  // namespace vcc
