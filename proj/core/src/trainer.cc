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

#include "vcc/trainer.h"

#include <cmath>

#include "json.hpp"
#include "vcc/analysis.h"
#include "vcc/errors.h"
#include "vcc/evaluator.h"

namespace vcc {
namespace {

struct LossGraph {
  Graph graph;
  NodeId loss;
};

LossGraph BuildLoss(const VccParameters &params, const TrainingExample &example,
                    const Event &negative) {
  const Event *cause = example.video->FindEvent(example.candidate->cause);
  const Event *effect = example.video->FindEvent(example.candidate->effect);
  if (cause == nullptr || effect == nullptr) {
    throw ValidationError("example " + example.id + " references unknown events");
  }
  const PairContext context = MakeContext(*example.pair, params.max_objects);
  LossGraph lg;
  BoundParameters bound = Bind(lg.graph, params);
  NodeId pos = ScoreNode(lg.graph, bound, params, params.variant, *cause,
                         *effect, context);
  NodeId neg = ScoreNode(lg.graph, bound, params, params.variant, *cause,
                         negative, context);
  lg.loss = lg.graph.Add(lg.graph.BceLoss(pos, 1), lg.graph.BceLoss(neg, 0));
  return lg;
}

}  // namespace

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning rate must be a finite positive number");
  }
  if (max_epochs < 1) throw ConfigError("max epochs must be at least 1");
  if (hidden == 0) throw ConfigError("hidden width must be positive");
  if (width == 0) throw ConfigError("embedding width must be positive");
  if (max_objects == 0) throw ConfigError("object budget must be positive");
}

std::vector<TrainingExample> CollectExamples(
    std::span<const VideoRecord> records) {
  std::vector<TrainingExample> examples;
  for (const VideoRecord &video : records) {
    if (video.split != Split::kTrain) continue;
    for (const ImagePair &pair : video.pairs) {
      for (const CandidatePair &c : pair.candidates) {
        if (IsPositive(c)) {
          examples.push_back({CandidateId(video, pair, c), &video, &pair, &c});
        }
      }
    }
  }
  return examples;
}

std::optional<Event> SampleNegative(const CandidatePair &positive,
                                    const VideoRecord &video, Rng &rng) {
  std::vector<const Event *> eligible;
  for (const Event &e : video.event_pool) {
    if (e.id != positive.cause && e.id != positive.effect) eligible.push_back(&e);
  }
  if (eligible.empty()) return std::nullopt;
  return *eligible[rng.Below(eligible.size())];
}

double ExampleLoss(const VccParameters &params, const TrainingExample &example,
                   const Event &negative) {
  LossGraph lg = BuildLoss(params, example, negative);
  return lg.graph.value(lg.loss)[0];
}

double TrainStep(VccParameters &params, const TrainingExample &example,
                 const Event &negative, double learning_rate) {
  LossGraph lg = BuildLoss(params, example, negative);
  const double loss = lg.graph.value(lg.loss)[0];
  if (!std::isfinite(loss)) return loss;
  const GradientMap grads = lg.graph.Backward(lg.loss);
  std::vector<ParameterSlot> slots = params.Slots();
  for (const auto &[node, grad] : grads) {
    const ParameterSlot &slot =
        slots.at(static_cast<std::size_t>(lg.graph.parameter_key(node)));
    if (!slot.trainable) continue;
    auto dst = slot.tensor->data();
    for (std::size_t i = 0; i < dst.size(); ++i) {
      dst[i] -= learning_rate * grad[i];
    }
  }
  return loss;
}

EpochResult TrainEpoch(VccParameters &params,
                       std::span<const TrainingExample> examples,
                       double learning_rate, Rng &rng, int epoch) {
  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.Shuffle(order);

  EpochResult result;
  double total = 0.0;
  for (std::size_t i : order) {
    const TrainingExample &ex = examples[i];
    std::optional<Event> negative = SampleNegative(*ex.candidate, *ex.video, rng);
    if (!negative) {
      ++result.skipped;
      continue;
    }
    const double loss = TrainStep(params, ex, *negative, learning_rate);
    if (!std::isfinite(loss)) {
      throw NumericError("non-finite loss in epoch " + std::to_string(epoch) +
                         " at example " + ex.id);
    }
    total += loss;
    ++result.steps;
  }
  if (result.steps > 0) result.mean_loss = total / static_cast<double>(result.steps);
  return result;
}

VccParameters InitialParameters(const TrainConfig &config,
                                std::span<const VideoRecord> train,
                                std::optional<EmbeddingTable> pretrained,
                                Rng &rng) {
  EmbeddingTable table =
      pretrained ? std::move(*pretrained)
                 : InitEmbeddingTable(BuildVocabulary(train), config.width, rng);
  std::size_t feature_width = 0;
  if (config.variant == Variant::kFeatureContext) {
    for (const VideoRecord &v : train) {
      for (const ImagePair &p : v.pairs) {
        if (p.image_feature) {
          feature_width = p.image_feature->size();
          break;
        }
      }
      if (feature_width > 0) break;
    }
  }
  return InitParameters(config.variant, std::move(table), config.hidden,
                        config.max_objects, feature_width, rng);
}

FitResult Fit(const TrainConfig &config, std::span<const VideoRecord> train,
              std::span<const VideoRecord> dev,
              std::optional<EmbeddingTable> pretrained) {
  config.Validate();
  const std::vector<RankingQuery> dev_queries = BuildQueries(dev, Split::kDev);
  if (dev_queries.empty()) {
    throw ConfigError("dev split has no positive queries for model selection");
  }
  const std::vector<TrainingExample> examples = CollectExamples(train);
  if (examples.empty()) throw ConfigError("train split has no positives");

  Rng rng(config.seed);
  FitResult result;
  VccParameters params =
      InitialParameters(config, train, std::move(pretrained), rng);
  double best_r5 = -1.0;
  double best_r1 = -1.0;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const EpochResult er =
        TrainEpoch(params, examples, config.learning_rate, rng, epoch);
    const EvalReport dev_report =
        Evaluate(ModelScorer(params), dev_queries, config.jobs);
    EpochLog entry{epoch,
                   er.mean_loss,
                   dev_report.overall.r1,
                   dev_report.overall.r5,
                   dev_report.overall.r10,
                   er.skipped};
    result.log.push_back(entry);
    if (entry.dev_r5 > best_r5 ||
        (entry.dev_r5 == best_r5 && entry.dev_r1 > best_r1)) {
      best_r5 = entry.dev_r5;
      best_r1 = entry.dev_r1;
      result.best = params;
      result.best_epoch = epoch;
    }
  }
  return result;
}

std::string FormatTrainingLog(std::span<const EpochLog> log) {
  std::string out;
  for (const EpochLog &e : log) {
    nlohmann::json j = {{"epoch", e.epoch},
                        {"train_loss", e.train_loss},
                        {"dev_r1", e.dev_r1},
                        {"dev_r5", e.dev_r5},
                        {"dev_r10", e.dev_r10}};
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace vcc
