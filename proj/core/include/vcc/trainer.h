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

#ifndef VCC_TRAINER_H_
#define VCC_TRAINER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vcc/dataset.h"
#include "vcc/encoders.h"
#include "vcc/model.h"
#include "vcc/rng.h"

namespace vcc {

struct TrainConfig {
  double learning_rate = 1e-4;
  int max_epochs = 10;
  std::uint64_t seed = 0;
  std::size_t hidden = kDefaultHidden;
  std::size_t width = 32;
  std::size_t max_objects = kDefaultObjects;
  Variant variant = Variant::kVcc;
  int jobs = 1;  // threads for dev evaluation

  // Throws ConfigError unless rate, epochs, widths and m are positive.
  void Validate() const;
};

// A with-context positive of the training split. Points into the records it
// was collected from, which must outlive it.
struct TrainingExample {
  std::string id;
  const VideoRecord *video;
  const ImagePair *pair;
  const CandidatePair *candidate;
};

std::vector<TrainingExample> CollectExamples(
    std::span<const VideoRecord> records);

// Uniform draw from the video's events other than the positive's cause and
// effect. Returns nullopt when nothing is eligible; callers skip the example.
std::optional<Event> SampleNegative(const CandidatePair &positive,
                                    const VideoRecord &video, Rng &rng);

// Summed cross-entropy of (positive, label 1) and (negative, label 0)
// followed by one SGD step w <- w - lr * grad. Frozen embeddings are left
// untouched. Returns the loss before the update.
double TrainStep(VccParameters &params, const TrainingExample &example,
                 const Event &negative, double learning_rate);

// Same loss without updating anything.
double ExampleLoss(const VccParameters &params, const TrainingExample &example,
                   const Event &negative);

struct EpochResult {
  double mean_loss = 0.0;  // over examples that took a step
  std::size_t steps = 0;
  std::size_t skipped = 0;  // positives without an eligible negative
};

// One pass over the positives in an order shuffled by `rng`, drawing a fresh
// negative for each. Throws NumericError naming the epoch and example on a
// non-finite loss.
EpochResult TrainEpoch(VccParameters &params,
                       std::span<const TrainingExample> examples,
                       double learning_rate, Rng &rng, int epoch = 1);

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double dev_r1 = 0.0;
  double dev_r5 = 0.0;
  double dev_r10 = 0.0;
  std::size_t skipped = 0;  // positives without an eligible negative
};

struct FitResult {
  VccParameters best;
  int best_epoch = 0;
  std::vector<EpochLog> log;
};

// Fresh parameters for `train` (vocabulary from its train split unless a
// frozen table is supplied).
VccParameters InitialParameters(const TrainConfig &config,
                                std::span<const VideoRecord> train,
                                std::optional<EmbeddingTable> pretrained,
                                Rng &rng);

// Trains for config.max_epochs, evaluating dev Recall@5 after every epoch and
// keeping the best parameters. Equal Recall@5 falls back to Recall@1, then
// to the earliest epoch.
FitResult Fit(const TrainConfig &config, std::span<const VideoRecord> train,
              std::span<const VideoRecord> dev,
              std::optional<EmbeddingTable> pretrained = std::nullopt);

// {"epoch", "train_loss", "dev_r1", "dev_r5", "dev_r10"} per line.
std::string FormatTrainingLog(std::span<const EpochLog> log);

}  // namespace vcc

#endif  // VCC_TRAINER_H_
