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

#ifndef VCC_GRAPH_H_
#define VCC_GRAPH_H_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "vcc/tensor.h"

namespace vcc {

// Clamp applied to probabilities before taking logarithms.
inline constexpr double kProbabilityEpsilon = 1e-12;

// Eager tensor kernels. The graph below records these and differentiates
// them; they are also usable on their own.
Tensor Affine(const Tensor &x, const Tensor &weight, const Tensor &bias);
Tensor Softmax(const Tensor &v);
double Sigmoid(double x);
// -(y ln p + (1-y) ln(1-p)) with p clamped to [eps, 1-eps]. label must be 0 or 1.
double BceLoss(double p, int label);

struct NodeId {
  std::uint32_t index = 0;
  friend auto operator<=>(NodeId, NodeId) = default;
};

// Gradients of a scalar loss keyed by parameter node. Every entry has the
// shape of the corresponding node value.
class GradientMap {
 public:
  bool contains(NodeId node) const { return grads_.count(node) > 0; }
  const Tensor &at(NodeId node) const;
  std::size_t size() const { return grads_.size(); }
  auto begin() const { return grads_.begin(); }
  auto end() const { return grads_.end(); }

 private:
  friend class Graph;
  std::map<NodeId, Tensor> grads_;
};

// Define-by-run computation graph. Nodes are appended in evaluation order,
// so inputs always precede the nodes that consume them and the graph is
// acyclic by construction. Values are computed eagerly when a node is
// added; Backward() walks the list in reverse.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph &) = delete;
  Graph &operator=(const Graph &) = delete;
  Graph(Graph &&) = default;
  Graph &operator=(Graph &&) = default;

  // Constant leaf. Receives no gradient.
  NodeId Input(Tensor value);
  // Trainable leaf referring to caller-owned storage, which must outlive the
  // graph. `key` is an opaque tag handed back by parameter_key().
  NodeId Parameter(const Tensor *value, int key);

  // x[n], W[m x n], b[m] -> W x + b.
  NodeId Affine(NodeId x, NodeId weight, NodeId bias);
  NodeId Relu(NodeId x);
  NodeId Sigmoid(NodeId x);
  NodeId Softmax(NodeId x);
  // Elementwise product and sum of equally shaped tensors.
  NodeId Mul(NodeId a, NodeId b);
  NodeId Add(NodeId a, NodeId b);
  // Concatenates vectors end to end.
  NodeId Concat(std::span<const NodeId> parts);
  NodeId Concat(std::initializer_list<NodeId> parts) {
    return Concat(std::span<const NodeId>(parts.begin(), parts.size()));
  }
  // Stacks k equally sized vectors into a k x d matrix.
  NodeId Stack(std::span<const NodeId> rows);
  // Selects rows of a matrix into a k x d matrix.
  NodeId Gather(NodeId table, std::vector<std::size_t> rows);
  // Row r of a matrix as a vector.
  NodeId Row(NodeId matrix, std::size_t r);
  // Mean over the rows of a k x d matrix -> d.
  NodeId RowMean(NodeId matrix);
  // weights[k], rows[k x d] -> sum_i weights_i * rows_i.
  NodeId WeightedSum(NodeId weights, NodeId rows);
  // Binary cross-entropy of a probability node against a fixed label.
  NodeId BceLoss(NodeId probability, int label);

  const Tensor &value(NodeId node) const;
  std::size_t size() const { return nodes_.size(); }
  bool is_parameter(NodeId node) const;
  int parameter_key(NodeId node) const;

  // Reverse-mode sweep from a one-element loss node. Returns gradients for
  // every parameter node that the loss depends on.
  GradientMap Backward(NodeId loss) const;

 private:
  enum class Op : std::uint8_t {
    kInput,
    kParameter,
    kAffine,
    kRelu,
    kSigmoid,
    kSoftmax,
    kMul,
    kAdd,
    kConcat,
    kStack,
    kGather,
    kRow,
    kRowMean,
    kWeightedSum,
    kBce,
  };

  struct Node {
    Op op;
    std::vector<NodeId> inputs{};
    Tensor value{};
    const Tensor *external = nullptr;
    int key = -1;                   // parameter tag
    std::vector<std::size_t> rows{};  // gather indices / row index
    int label = 0;                  // bce target
  };

  NodeId Push(Node node);
  const Node &node(NodeId id) const;

  std::vector<Node> nodes_;
};

}  // namespace vcc

#endif  // VCC_GRAPH_H_
