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

#ifndef VCC_MODEL_H_
#define VCC_MODEL_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vcc/dataset.h"
#include "vcc/encoders.h"
#include "vcc/graph.h"
#include "vcc/rng.h"
#include "vcc/tensor.h"

namespace vcc {

// Full cross-attention model and the three ablations.
enum class Variant { kVcc, kNoContext, kNoAttention, kFeatureContext };

std::string_view VariantName(Variant variant);
Variant ParseVariant(std::string_view name);

inline constexpr std::size_t kDefaultHidden = 200;
inline constexpr std::size_t kDefaultObjects = 10;

// Two-layer perceptron: in -> relu(hidden) -> 1.
struct FeedForward {
  Tensor w1;  // hidden x in
  Tensor b1;  // hidden
  Tensor w2;  // 1 x hidden
  Tensor b2;  // 1

  static FeedForward Init(std::size_t in, std::size_t hidden, Rng &rng);
  std::size_t input_width() const { return w1.cols(); }
  bool defined() const { return !w1.empty(); }
};

struct ParameterSlot {
  std::string name;
  Tensor *tensor;
  bool trainable;
};

struct VccParameters {
  Variant variant = Variant::kVcc;
  std::size_t hidden = kDefaultHidden;
  std::size_t max_objects = kDefaultObjects;
  std::size_t feature_width = 0;  // feature-context variant only

  EmbeddingTable embedding;
  FeedForward nn_a;  // 2d -> 1, context attention (vcc only)
  FeedForward nn_b;  // 2d -> 1, token attention (vcc only)
  FeedForward nn_c;  // 4d -> 1 (2d for no-context)
  Tensor proj_w;     // d x feature_width (feature-context only)
  Tensor proj_b;     // d

  std::size_t width() const { return embedding.width(); }

  // Tensors used by this variant, in a fixed order. Slot indices double as
  // graph parameter keys.
  std::vector<ParameterSlot> Slots();
  std::vector<std::pair<std::string, const Tensor *>> Slots() const;
};

// Networks use Glorot-uniform weights and zero biases.
VccParameters InitParameters(Variant variant, EmbeddingTable embedding,
                             std::size_t hidden, std::size_t max_objects,
                             std::size_t feature_width, Rng &rng);

// Visual context of one image pair as the model consumes it.
struct PairContext {
  std::vector<std::string> objects;  // selected object words, best first
  std::optional<std::vector<double>> feature;
};

PairContext MakeContext(const ImagePair &pair, std::size_t max_objects);

// Parameter nodes of one graph.
struct BoundParameters {
  struct Net {
    NodeId w1, b1, w2, b2;
  };
  NodeId embedding;
  Net nn_a, nn_b, nn_c;
  NodeId proj_w, proj_b;
};

BoundParameters Bind(Graph &graph, const VccParameters &params);

// Graph builders. Each returns the node of the named quantity.
NodeId FeedForwardNode(Graph &graph, const BoundParameters::Net &net,
                       NodeId input);
// Token embeddings of an event (n x d).
NodeId EventTokensNode(Graph &graph, const BoundParameters &bound,
                       const VccParameters &params, const Event &event);
// Mean token embedding of each object word.
std::vector<NodeId> ObjectNodes(Graph &graph, const BoundParameters &bound,
                                const VccParameters &params,
                                std::span<const std::string> objects);
// Attention-weighted sum of objects keyed on the mean event token. Zero
// objects yield the zero vector.
NodeId ContextNode(Graph &graph, const BoundParameters &bound,
                   NodeId event_tokens, std::span<const NodeId> objects,
                   std::size_t width);
// Attention-weighted sum of event tokens keyed on a context vector.
NodeId EventNode(Graph &graph, const BoundParameters &bound, NodeId context,
                 NodeId event_tokens);
// Causality probability F(cause, effect, pair) computed the way `variant`
// does. Throws ConfigError if params lack a tensor the variant needs.
NodeId ScoreNode(Graph &graph, const BoundParameters &bound,
                 const VccParameters &params, Variant variant,
                 const Event &cause, const Event &effect,
                 const PairContext &context);

// Eager forms of the two attention steps over explicit vectors.
Tensor ContextRepresentation(const VccParameters &params,
                             const Tensor &event_tokens,
                             std::span<const Tensor> objects);
Tensor EventRepresentation(const VccParameters &params, const Tensor &context,
                           const Tensor &event_tokens);

// Probabilities clamped into [1e-12, 1 - 1e-12]. Each variant only needs the
// tensors it uses, so e.g. VCC parameters also drive PredictNoAttention.
double PredictVcc(const VccParameters &params, const Event &cause,
                  const Event &effect, std::span<const std::string> objects);
double PredictNoContext(const VccParameters &params, const Event &cause,
                        const Event &effect);
double PredictNoAttention(const VccParameters &params, const Event &cause,
                          const Event &effect,
                          std::span<const std::string> objects);
// Throws ConfigError when the feature vector is missing.
double PredictFeatureContext(const VccParameters &params, const Event &cause,
                             const Event &effect,
                             const std::vector<double> *feature);
// Dispatches on params.variant.
double Predict(const VccParameters &params, const Event &cause,
               const Event &effect, const PairContext &context);

}  // namespace vcc

#endif  // VCC_MODEL_H_
