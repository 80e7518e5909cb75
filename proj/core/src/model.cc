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

#include "vcc/model.h"

#include <algorithm>
#include <cmath>

#include "vcc/errors.h"
#include "vcc/text_util.h"

namespace vcc {
namespace {

Tensor GlorotMatrix(std::size_t rows, std::size_t cols, Rng &rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Tensor t(Shape{rows, cols});
  for (double &v : t.data()) v = rng.Uniform(-limit, limit);
  return t;
}

void RequireNet(const FeedForward &net, std::size_t input, const char *name,
                Variant variant) {
  if (!net.defined()) {
    throw ConfigError(std::string(name) + " is required by the " +
                      std::string(VariantName(variant)) + " scorer");
  }
  if (net.input_width() != input) {
    throw DimensionError(std::string(name) + " takes input width " +
                         std::to_string(net.input_width()) + ", the " +
                         std::string(VariantName(variant)) + " scorer feeds " +
                         std::to_string(input));
  }
}

double ClampProbability(double p) {
  return std::clamp(p, kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
}

NodeId Attend(Graph &graph, const BoundParameters::Net &net, NodeId key,
              std::span<const NodeId> items, NodeId stacked) {
  std::vector<NodeId> scores;
  scores.reserve(items.size());
  for (NodeId item : items) {
    scores.push_back(FeedForwardNode(graph, net, graph.Concat({key, item})));
  }
  NodeId weights = graph.Softmax(graph.Concat(scores));
  return graph.WeightedSum(weights, stacked);
}

void AddNet(std::vector<ParameterSlot> &slots, const std::string &prefix,
            FeedForward &net) {
  if (!net.defined()) return;
  slots.push_back({prefix + ".w1", &net.w1, true});
  slots.push_back({prefix + ".b1", &net.b1, true});
  slots.push_back({prefix + ".w2", &net.w2, true});
  slots.push_back({prefix + ".b2", &net.b2, true});
}

}  // namespace

std::string_view VariantName(Variant variant) {
  switch (variant) {
    case Variant::kVcc:
      return "vcc";
    case Variant::kNoContext:
      return "no-context";
    case Variant::kNoAttention:
      return "no-attention";
    case Variant::kFeatureContext:
      return "feature-context";
  }
  return "vcc";
}

Variant ParseVariant(std::string_view name) {
  for (Variant v : {Variant::kVcc, Variant::kNoContext, Variant::kNoAttention,
                    Variant::kFeatureContext}) {
    if (VariantName(v) == name) return v;
  }
  throw DomainError("unknown model variant '" + std::string(name) +
                    "' (expected vcc, no-context, no-attention or "
                    "feature-context)");
}

FeedForward FeedForward::Init(std::size_t in, std::size_t hidden, Rng &rng) {
  FeedForward net;
  net.w1 = GlorotMatrix(hidden, in, rng);
  net.b1 = Tensor::Zeros(hidden);
  net.w2 = GlorotMatrix(1, hidden, rng);
  net.b2 = Tensor::Zeros(1);
  return net;
}

std::vector<ParameterSlot> VccParameters::Slots() {
  std::vector<ParameterSlot> slots;
  slots.push_back({"embedding", &embedding.matrix, embedding.trainable});
  AddNet(slots, "nn_a", nn_a);
  AddNet(slots, "nn_b", nn_b);
  AddNet(slots, "nn_c", nn_c);
  if (!proj_w.empty()) {
    slots.push_back({"proj.w", &proj_w, true});
    slots.push_back({"proj.b", &proj_b, true});
  }
  return slots;
}

std::vector<std::pair<std::string, const Tensor *>> VccParameters::Slots()
    const {
  std::vector<std::pair<std::string, const Tensor *>> out;
  for (const ParameterSlot &s : const_cast<VccParameters *>(this)->Slots()) {
    out.emplace_back(s.name, s.tensor);
  }
  return out;
}

VccParameters InitParameters(Variant variant, EmbeddingTable embedding,
                             std::size_t hidden, std::size_t max_objects,
                             std::size_t feature_width, Rng &rng) {
  if (hidden == 0) throw DomainError("hidden width must be positive");
  if (max_objects == 0) throw DomainError("object budget must be positive");
  VccParameters p;
  p.variant = variant;
  p.hidden = hidden;
  p.max_objects = max_objects;
  p.embedding = std::move(embedding);
  const std::size_t d = p.width();
  switch (variant) {
    case Variant::kVcc:
      p.nn_a = FeedForward::Init(2 * d, hidden, rng);
      p.nn_b = FeedForward::Init(2 * d, hidden, rng);
      p.nn_c = FeedForward::Init(4 * d, hidden, rng);
      break;
    case Variant::kNoContext:
      p.nn_c = FeedForward::Init(2 * d, hidden, rng);
      break;
    case Variant::kNoAttention:
      p.nn_c = FeedForward::Init(4 * d, hidden, rng);
      break;
    case Variant::kFeatureContext:
      if (feature_width == 0) {
        throw ConfigError(
            "feature-context needs image features; use no-context for data "
            "without them");
      }
      p.feature_width = feature_width;
      p.nn_c = FeedForward::Init(4 * d, hidden, rng);
      p.proj_w = GlorotMatrix(d, feature_width, rng);
      p.proj_b = Tensor::Zeros(d);
      break;
  }
  return p;
}

PairContext MakeContext(const ImagePair &pair, std::size_t max_objects) {
  PairContext ctx;
  for (const Detection &d : SelectObjects(pair.detections, max_objects)) {
    ctx.objects.push_back(d.word);
  }
  ctx.feature = pair.image_feature;
  return ctx;
}

BoundParameters Bind(Graph &graph, const VccParameters &params) {
  BoundParameters b;
  int key = 0;
  auto next = [&](const Tensor &t) { return graph.Parameter(&t, key++); };
  auto net = [&](const FeedForward &ff, BoundParameters::Net &out) {
    if (!ff.defined()) return;
    out.w1 = next(ff.w1);
    out.b1 = next(ff.b1);
    out.w2 = next(ff.w2);
    out.b2 = next(ff.b2);
  };
  b.embedding = next(params.embedding.matrix);
  net(params.nn_a, b.nn_a);
  net(params.nn_b, b.nn_b);
  net(params.nn_c, b.nn_c);
  if (!params.proj_w.empty()) {
    b.proj_w = next(params.proj_w);
    b.proj_b = next(params.proj_b);
  }
  return b;
}

NodeId FeedForwardNode(Graph &graph, const BoundParameters::Net &net,
                       NodeId input) {
  NodeId hidden = graph.Relu(graph.Affine(input, net.w1, net.b1));
  return graph.Affine(hidden, net.w2, net.b2);
}

NodeId EventTokensNode(Graph &graph, const BoundParameters &bound,
                       const VccParameters &params, const Event &event) {
  if (event.tokens.empty()) {
    throw DomainError("event '" + event.id + "' has no tokens");
  }
  return graph.Gather(bound.embedding,
                      params.embedding.vocab.Indices(event.tokens));
}

std::vector<NodeId> ObjectNodes(Graph &graph, const BoundParameters &bound,
                                const VccParameters &params,
                                std::span<const std::string> objects) {
  std::vector<NodeId> nodes;
  nodes.reserve(objects.size());
  for (const std::string &word : objects) {
    const auto tokens = Tokenize(word);
    if (tokens.empty()) throw DomainError("empty object word");
    NodeId rows =
        graph.Gather(bound.embedding, params.embedding.vocab.Indices(tokens));
    nodes.push_back(graph.RowMean(rows));
  }
  return nodes;
}

NodeId ContextNode(Graph &graph, const BoundParameters &bound,
                   NodeId event_tokens, std::span<const NodeId> objects,
                   std::size_t width) {
  if (graph.value(event_tokens).cols() != width) {
    throw DimensionError("event tokens have width " +
                         std::to_string(graph.value(event_tokens).cols()) +
                         ", objects have width " + std::to_string(width));
  }
  if (objects.empty()) return graph.Input(Tensor::Zeros(width));
  NodeId mean_token = graph.RowMean(event_tokens);
  NodeId stacked = graph.Stack(objects);
  return Attend(graph, bound.nn_a, mean_token, objects, stacked);
}

NodeId EventNode(Graph &graph, const BoundParameters &bound, NodeId context,
                 NodeId event_tokens) {
  const std::size_t n = graph.value(event_tokens).rows();
  std::vector<NodeId> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) rows.push_back(graph.Row(event_tokens, i));
  return Attend(graph, bound.nn_b, context, rows, event_tokens);
}

NodeId ScoreNode(Graph &graph, const BoundParameters &bound,
                 const VccParameters &params, Variant variant,
                 const Event &cause, const Event &effect,
                 const PairContext &context) {
  const std::size_t d = params.width();
  NodeId cause_tokens = EventTokensNode(graph, bound, params, cause);
  NodeId effect_tokens = EventTokensNode(graph, bound, params, effect);
  NodeId features{};
  switch (variant) {
    case Variant::kVcc: {
      RequireNet(params.nn_a, 2 * d, "nn_a", variant);
      RequireNet(params.nn_b, 2 * d, "nn_b", variant);
      RequireNet(params.nn_c, 4 * d, "nn_c", variant);
      const auto objects = ObjectNodes(graph, bound, params, context.objects);
      NodeId cause_ctx = ContextNode(graph, bound, cause_tokens, objects, d);
      NodeId effect_ctx = ContextNode(graph, bound, effect_tokens, objects, d);
      NodeId cause_vec = EventNode(graph, bound, cause_ctx, cause_tokens);
      NodeId effect_vec = EventNode(graph, bound, effect_ctx, effect_tokens);
      features = graph.Concat({cause_vec, effect_vec, cause_ctx, effect_ctx});
      break;
    }
    case Variant::kNoContext: {
      RequireNet(params.nn_c, 2 * d, "nn_c", variant);
      features = graph.Concat(
          {graph.RowMean(cause_tokens), graph.RowMean(effect_tokens)});
      break;
    }
    case Variant::kNoAttention: {
      RequireNet(params.nn_c, 4 * d, "nn_c", variant);
      const auto objects = ObjectNodes(graph, bound, params, context.objects);
      NodeId ctx = objects.empty() ? graph.Input(Tensor::Zeros(d))
                                   : graph.RowMean(graph.Stack(objects));
      features = graph.Concat({graph.RowMean(cause_tokens),
                               graph.RowMean(effect_tokens), ctx, ctx});
      break;
    }
    case Variant::kFeatureContext: {
      RequireNet(params.nn_c, 4 * d, "nn_c", variant);
      if (params.proj_w.empty()) {
        throw ConfigError("feature-context scorer needs a feature projection");
      }
      if (!context.feature) {
        throw ConfigError(
            "image pair has no image_feature; the feature-context variant "
            "needs one (use no-context instead)");
      }
      if (context.feature->size() != params.proj_w.cols()) {
        throw DimensionError("image feature has width " +
                             std::to_string(context.feature->size()) +
                             ", projection expects " +
                             std::to_string(params.proj_w.cols()));
      }
      NodeId f = graph.Input(Tensor::Vector(*context.feature));
      NodeId ctx = graph.Affine(f, bound.proj_w, bound.proj_b);
      features = graph.Concat({graph.RowMean(cause_tokens),
                               graph.RowMean(effect_tokens), ctx, ctx});
      break;
    }
  }
  return graph.Sigmoid(FeedForwardNode(graph, bound.nn_c, features));
}

Tensor ContextRepresentation(const VccParameters &params,
                             const Tensor &event_tokens,
                             std::span<const Tensor> objects) {
  RequireNet(params.nn_a, 2 * params.width(), "nn_a", Variant::kVcc);
  Graph graph;
  BoundParameters bound = Bind(graph, params);
  NodeId tokens = graph.Input(event_tokens);
  std::vector<NodeId> nodes;
  for (const Tensor &o : objects) {
    if (o.size() != event_tokens.cols()) {
      throw DimensionError("object width " + std::to_string(o.size()) +
                           " differs from event width " +
                           std::to_string(event_tokens.cols()));
    }
    nodes.push_back(graph.Input(o));
  }
  return graph.value(
      ContextNode(graph, bound, tokens, nodes, event_tokens.cols()));
}

Tensor EventRepresentation(const VccParameters &params, const Tensor &context,
                           const Tensor &event_tokens) {
  RequireNet(params.nn_b, 2 * params.width(), "nn_b", Variant::kVcc);
  if (context.size() != event_tokens.cols()) {
    throw DimensionError("context width " + std::to_string(context.size()) +
                         " differs from event width " +
                         std::to_string(event_tokens.cols()));
  }
  Graph graph;
  BoundParameters bound = Bind(graph, params);
  return graph.value(EventNode(graph, bound, graph.Input(context),
                               graph.Input(event_tokens)));
}

namespace {

double Evaluate(const VccParameters &params, Variant variant,
                const Event &cause, const Event &effect,
                const PairContext &context) {
  Graph graph;
  BoundParameters bound = Bind(graph, params);
  NodeId p = ScoreNode(graph, bound, params, variant, cause, effect, context);
  return ClampProbability(graph.value(p)[0]);
}

}  // namespace

double PredictVcc(const VccParameters &params, const Event &cause,
                  const Event &effect, std::span<const std::string> objects) {
  PairContext ctx{{objects.begin(), objects.end()}, std::nullopt};
  return Evaluate(params, Variant::kVcc, cause, effect, ctx);
}

double PredictNoContext(const VccParameters &params, const Event &cause,
                        const Event &effect) {
  return Evaluate(params, Variant::kNoContext, cause, effect, PairContext{});
}

double PredictNoAttention(const VccParameters &params, const Event &cause,
                          const Event &effect,
                          std::span<const std::string> objects) {
  PairContext ctx{{objects.begin(), objects.end()}, std::nullopt};
  return Evaluate(params, Variant::kNoAttention, cause, effect, ctx);
}

double PredictFeatureContext(const VccParameters &params, const Event &cause,
                             const Event &effect,
                             const std::vector<double> *feature) {
  PairContext ctx;
  if (feature != nullptr) ctx.feature = *feature;
  return Evaluate(params, Variant::kFeatureContext, cause, effect, ctx);
}

double Predict(const VccParameters &params, const Event &cause,
               const Event &effect, const PairContext &context) {
  return Evaluate(params, params.variant, cause, effect, context);
}

}  // namespace vcc
