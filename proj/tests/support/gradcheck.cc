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

#include "gradcheck.h"

#include <algorithm>
#include <cmath>

namespace vcc::testing {

double RelativeError(double analytic, double numeric, double floor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

namespace {

double LossValue(const std::vector<Tensor *> &params, const LossBuilder &build) {
  Graph g;
  std::vector<NodeId> nodes;
  for (std::size_t i = 0; i < params.size(); ++i) {
    nodes.push_back(g.Parameter(params[i], static_cast<int>(i)));
  }
  return g.value(build(g, nodes)).item();
}

}  // namespace

double GradientCheck(const std::vector<Tensor *> &params,
                     const LossBuilder &build, double h) {
  Graph g;
  std::vector<NodeId> nodes;
  for (std::size_t i = 0; i < params.size(); ++i) {
    nodes.push_back(g.Parameter(params[i], static_cast<int>(i)));
  }
  const GradientMap grads = g.Backward(build(g, nodes));
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto data = params[i]->data();
    for (std::size_t k = 0; k < data.size(); ++k) {
      const double saved = data[k];
      data[k] = saved + h;
      const double up = LossValue(params, build);
      data[k] = saved - h;
      const double down = LossValue(params, build);
      data[k] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double analytic =
          grads.contains(nodes[i]) ? grads.at(nodes[i])[k] : 0.0;
      worst = std::max(worst, RelativeError(analytic, numeric));
    }
  }
  return worst;
}

NodeId PairLoss(Graph &graph, const BoundParameters &bound,
                const VccParameters &params, const Event &cause,
                const Event &effect, const Event &negative,
                const PairContext &context) {
  const NodeId pos = ScoreNode(graph, bound, params, params.variant, cause,
                               effect, context);
  const NodeId neg = ScoreNode(graph, bound, params, params.variant, cause,
                               negative, context);
  return graph.Add(graph.BceLoss(pos, 1), graph.BceLoss(neg, 0));
}

double ModelGradientCheck(VccParameters &params, const Event &cause,
                          const Event &effect, const Event &negative,
                          const PairContext &context, double h) {
  auto loss_of = [&]() {
    Graph g;
    const BoundParameters bound = Bind(g, params);
    return g.value(PairLoss(g, bound, params, cause, effect, negative, context)).item();
  };
  Graph g;
  const BoundParameters bound = Bind(g, params);
  const GradientMap grads =
      g.Backward(PairLoss(g, bound, params, cause, effect, negative, context));
  // Map slot index -> gradient.
  std::vector<const Tensor *> by_slot(params.Slots().size(), nullptr);
  for (const auto &[node, grad] : grads) {
    by_slot.at(static_cast<std::size_t>(g.parameter_key(node))) = &grad;
  }
  double worst = 0.0;
  std::vector<ParameterSlot> slots = params.Slots();
  for (std::size_t s = 0; s < slots.size(); ++s) {
    auto data = slots[s].tensor->data();
    for (std::size_t k = 0; k < data.size(); ++k) {
      const double saved = data[k];
      data[k] = saved + h;
      const double up = loss_of();
      data[k] = saved - h;
      const double down = loss_of();
      data[k] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double analytic = by_slot[s] ? (*by_slot[s])[k] : 0.0;
      worst = std::max(worst, RelativeError(analytic, numeric));
    }
  }
  return worst;
}

}  // namespace vcc::testing
