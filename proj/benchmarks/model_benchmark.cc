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

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "vcc/dataset.h"
#include "vcc/encoders.h"
#include "vcc/evaluator.h"
#include "vcc/model.h"
#include "vcc/trainer.h"

namespace vcc {
namespace {

std::vector<std::string> Words(std::size_t n) {
  std::vector<std::string> w = {"<unk>", "<pad>"};
  for (std::size_t i = 0; i < n; ++i) w.push_back("w" + std::to_string(i));
  return w;
}

std::string Sentence(std::size_t first, std::size_t length) {
  std::string s;
  for (std::size_t i = 0; i < length; ++i) s += "w" + std::to_string((first + i) % 50) + " ";
  return s;
}

VccParameters Params(Variant variant, std::size_t d, std::size_t h) {
  Rng rng(1);
  return InitParameters(variant, InitEmbeddingTable(Vocabulary::FromTokens(Words(50)), d, rng), h,
                        kDefaultObjects, variant == Variant::kFeatureContext ? 64 : 0, rng);
}

std::vector<std::string> Objects() {
  std::vector<std::string> objs;
  for (std::size_t i = 0; i < kDefaultObjects; ++i) objs.push_back("w" + std::to_string(30 + i));
  return objs;
}

void BM_PredictVcc(benchmark::State &state) {
  const VccParameters p = Params(Variant::kVcc, state.range(0), state.range(1));
  const Event a = Event::Make("a", Sentence(0, 6));
  const Event b = Event::Make("b", Sentence(10, 6));
  const auto objs = Objects();
  for (auto _ : state) benchmark::DoNotOptimize(PredictVcc(p, a, b, objs));
}
BENCHMARK(BM_PredictVcc)->Args({32, 16})->Args({32, 200})->Args({300, 200});

void BM_PredictNoContext(benchmark::State &state) {
  const VccParameters p = Params(Variant::kNoContext, state.range(0), state.range(1));
  const Event a = Event::Make("a", Sentence(0, 6));
  const Event b = Event::Make("b", Sentence(10, 6));
  for (auto _ : state) benchmark::DoNotOptimize(PredictNoContext(p, a, b));
}
BENCHMARK(BM_PredictNoContext)->Args({32, 200})->Args({300, 200});

// Forward and backward pass plus the parameter update for one positive and
// one negative.
void BM_TrainStep(benchmark::State &state) {
  VideoRecord video;
  video.id = "v";
  video.category = "bench";
  ImagePair pair;
  pair.id = "p1";
  for (int i = 0; i < 4; ++i) pair.events.push_back(Event::Make("e" + std::to_string(i), Sentence(i * 7, 6)));
  for (const auto &o : Objects()) pair.detections.push_back({o, 0.5, 1});
  pair.candidates.push_back({"e0", "e1", std::vector<VoteLabel>(5, VoteLabel::kCausal), {}});
  video.pairs.push_back(pair);
  Finalize(video);
  const auto examples = CollectExamples(std::span<const VideoRecord>(&video, 1));
  VccParameters p = Params(static_cast<Variant>(state.range(0)), 32, 200);
  const Event &negative = *video.FindEvent("e2");
  for (auto _ : state) benchmark::DoNotOptimize(TrainStep(p, examples[0], negative, 1e-6));
}
BENCHMARK(BM_TrainStep)
    ->Arg(static_cast<int>(Variant::kVcc))
    ->Arg(static_cast<int>(Variant::kNoContext))
    ->Arg(static_cast<int>(Variant::kNoAttention));

// Ranking one query over a 32-candidate pool.
void BM_RankQuery(benchmark::State &state) {
  RankingQuery q;
  q.id = "q";
  q.category = "bench";
  q.cause = Event::Make("c", Sentence(0, 6));
  for (int i = 0; i < 32; ++i) q.pool.push_back(Event::Make("e" + std::to_string(100 + i), Sentence(i, 5)));
  q.gold_id = q.pool[3].id;
  for (const auto &o : Objects()) q.detections.push_back({o, 0.5, 1});
  const Scorer scorer = ModelScorer(Params(Variant::kVcc, 32, 200));
  for (auto _ : state) benchmark::DoNotOptimize(RankCandidates(scorer, q));
}
BENCHMARK(BM_RankQuery);

}  // namespace
}  // namespace vcc

BENCHMARK_MAIN();
