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

#include "vcc/graph.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "vcc/errors.h"

namespace vcc {
namespace {

void RequireVector(const Tensor &t, const char *what) {
  if (t.rank() != 1) {
    throw DimensionError(std::string(what) + " expects a vector, got shape " +
                         ShapeString(t.shape()));
  }
}

void RequireMatrix(const Tensor &t, const char *what) {
  if (t.rank() != 2) {
    throw DimensionError(std::string(what) + " expects a matrix, got shape " +
                         ShapeString(t.shape()));
  }
}

void RequireSameShape(const Tensor &a, const Tensor &b, const char *what) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(what) + ": shape mismatch " +
                         ShapeString(a.shape()) + " vs " +
                         ShapeString(b.shape()));
  }
}

void AddInto(Tensor &dst, const Tensor &src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

}  // namespace

Tensor Affine(const Tensor &x, const Tensor &weight, const Tensor &bias) {
  RequireVector(x, "affine input");
  RequireMatrix(weight, "affine weight");
  RequireVector(bias, "affine bias");
  if (weight.cols() != x.size() || weight.rows() != bias.size()) {
    throw DimensionError("affine: weight " + ShapeString(weight.shape()) +
                         " does not conform to input " +
                         ShapeString(x.shape()) + " and bias " +
                         ShapeString(bias.shape()));
  }
  Tensor out = bias;
  for (std::size_t i = 0; i < weight.rows(); ++i) {
    auto w = weight.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) acc += w[j] * x[j];
    out[i] += acc;
  }
  return out;
}

Tensor Softmax(const Tensor &v) {
  if (v.empty()) throw DomainError("softmax of an empty vector");
  RequireVector(v, "softmax");
  const double peak = *std::max_element(v.data().begin(), v.data().end());
  Tensor out(v.shape());
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - peak);
    total += out[i];
  }
  for (std::size_t i = 0; i < v.size(); ++i) out[i] /= total;
  return out;
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double BceLoss(double p, int label) {
  if (label != 0 && label != 1) {
    throw DomainError("bce label must be 0 or 1, got " + std::to_string(label));
  }
  const double q =
      std::clamp(p, kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
  return label == 1 ? -std::log(q) : -std::log(1.0 - q);
}

const Tensor &GradientMap::at(NodeId node) const {
  auto it = grads_.find(node);
  if (it == grads_.end()) {
    throw LookupError("no gradient recorded for node " +
                      std::to_string(node.index));
  }
  return it->second;
}

NodeId Graph::Push(Node node) {
  nodes_.push_back(std::move(node));
  return NodeId{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

const Graph::Node &Graph::node(NodeId id) const {
  if (id.index >= nodes_.size()) {
    throw LookupError("unknown graph node " + std::to_string(id.index));
  }
  return nodes_[id.index];
}

const Tensor &Graph::value(NodeId id) const {
  const Node &n = node(id);
  return n.external != nullptr ? *n.external : n.value;
}

bool Graph::is_parameter(NodeId id) const {
  return node(id).op == Op::kParameter;
}

int Graph::parameter_key(NodeId id) const {
  const Node &n = node(id);
  if (n.op != Op::kParameter) {
    throw LookupError("node " + std::to_string(id.index) +
                      " is not a parameter");
  }
  return n.key;
}

NodeId Graph::Input(Tensor value) {
  return Push(Node{.op = Op::kInput, .value = std::move(value)});
}

NodeId Graph::Parameter(const Tensor *value, int key) {
  if (value == nullptr) throw ContractError("parameter storage is null");
  return Push(Node{.op = Op::kParameter, .external = value, .key = key});
}

NodeId Graph::Affine(NodeId x, NodeId weight, NodeId bias) {
  Tensor out = vcc::Affine(value(x), value(weight), value(bias));
  return Push(Node{.op = Op::kAffine, .inputs = {x, weight, bias},
                   .value = std::move(out)});
}

NodeId Graph::Relu(NodeId x) {
  Tensor out = value(x);
  for (double &v : out.data()) v = v > 0.0 ? v : 0.0;
  return Push(Node{.op = Op::kRelu, .inputs = {x}, .value = std::move(out)});
}

NodeId Graph::Sigmoid(NodeId x) {
  Tensor out = value(x);
  for (double &v : out.data()) v = vcc::Sigmoid(v);
  return Push(Node{.op = Op::kSigmoid, .inputs = {x}, .value = std::move(out)});
}

NodeId Graph::Softmax(NodeId x) {
  Tensor out = vcc::Softmax(value(x));
  return Push(Node{.op = Op::kSoftmax, .inputs = {x}, .value = std::move(out)});
}

NodeId Graph::Mul(NodeId a, NodeId b) {
  RequireSameShape(value(a), value(b), "mul");
  Tensor out = value(a);
  const Tensor &rhs = value(b);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= rhs[i];
  return Push(Node{.op = Op::kMul, .inputs = {a, b}, .value = std::move(out)});
}

NodeId Graph::Add(NodeId a, NodeId b) {
  RequireSameShape(value(a), value(b), "add");
  Tensor out = value(a);
  AddInto(out, value(b));
  return Push(Node{.op = Op::kAdd, .inputs = {a, b}, .value = std::move(out)});
}

NodeId Graph::Concat(std::span<const NodeId> parts) {
  if (parts.empty()) throw DimensionError("concat of zero tensors");
  std::vector<double> data;
  for (NodeId p : parts) {
    const Tensor &t = value(p);
    RequireVector(t, "concat");
    data.insert(data.end(), t.data().begin(), t.data().end());
  }
  return Push(Node{.op = Op::kConcat,
                   .inputs = std::vector<NodeId>(parts.begin(), parts.end()),
                   .value = Tensor::Vector(std::move(data))});
}

NodeId Graph::Stack(std::span<const NodeId> rows) {
  if (rows.empty()) throw DimensionError("stack of zero vectors");
  const std::size_t width = value(rows.front()).size();
  std::vector<double> data;
  data.reserve(rows.size() * width);
  for (NodeId r : rows) {
    const Tensor &t = value(r);
    RequireVector(t, "stack");
    if (t.size() != width) {
      throw DimensionError("stack: row widths differ (" +
                           std::to_string(width) + " vs " +
                           std::to_string(t.size()) + ")");
    }
    data.insert(data.end(), t.data().begin(), t.data().end());
  }
  return Push(Node{.op = Op::kStack,
                   .inputs = std::vector<NodeId>(rows.begin(), rows.end()),
                   .value = Tensor::Matrix(rows.size(), width, std::move(data))});
}

NodeId Graph::Gather(NodeId table, std::vector<std::size_t> rows) {
  const Tensor &t = value(table);
  RequireMatrix(t, "gather");
  if (rows.empty()) throw DimensionError("gather of zero rows");
  std::vector<double> data;
  data.reserve(rows.size() * t.cols());
  for (std::size_t r : rows) {
    if (r >= t.rows()) {
      throw DimensionError("gather: row " + std::to_string(r) +
                           " out of range for " + ShapeString(t.shape()));
    }
    auto src = t.row(r);
    data.insert(data.end(), src.begin(), src.end());
  }
  Tensor out = Tensor::Matrix(rows.size(), t.cols(), std::move(data));
  return Push(Node{.op = Op::kGather, .inputs = {table},
                   .value = std::move(out), .rows = std::move(rows)});
}

NodeId Graph::Row(NodeId matrix, std::size_t r) {
  const Tensor &t = value(matrix);
  RequireMatrix(t, "row");
  if (r >= t.rows()) {
    throw DimensionError("row " + std::to_string(r) + " out of range for " +
                         ShapeString(t.shape()));
  }
  auto src = t.row(r);
  return Push(Node{.op = Op::kRow, .inputs = {matrix},
                   .value = Tensor::Vector({src.begin(), src.end()}),
                   .rows = {r}});
}

NodeId Graph::RowMean(NodeId matrix) {
  const Tensor &t = value(matrix);
  RequireMatrix(t, "row mean");
  Tensor out = Tensor::Zeros(t.cols());
  for (std::size_t r = 0; r < t.rows(); ++r) {
    auto src = t.row(r);
    for (std::size_t c = 0; c < t.cols(); ++c) out[c] += src[c];
  }
  const double scale = 1.0 / static_cast<double>(t.rows());
  for (double &v : out.data()) v *= scale;
  return Push(Node{.op = Op::kRowMean, .inputs = {matrix},
                   .value = std::move(out)});
}

NodeId Graph::WeightedSum(NodeId weights, NodeId rows) {
  const Tensor &w = value(weights);
  const Tensor &m = value(rows);
  RequireVector(w, "weighted sum weights");
  RequireMatrix(m, "weighted sum rows");
  if (w.size() != m.rows()) {
    throw DimensionError("weighted sum: " + ShapeString(w.shape()) +
                         " weights for " + ShapeString(m.shape()) + " rows");
  }
  Tensor out = Tensor::Zeros(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto src = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) out[c] += w[r] * src[c];
  }
  return Push(Node{.op = Op::kWeightedSum, .inputs = {weights, rows},
                   .value = std::move(out)});
}

NodeId Graph::BceLoss(NodeId probability, int label) {
  const Tensor &p = value(probability);
  if (p.size() != 1) {
    throw DimensionError("bce expects a one-element probability, got " +
                         ShapeString(p.shape()));
  }
  double loss = vcc::BceLoss(p[0], label);
  return Push(Node{.op = Op::kBce, .inputs = {probability},
                   .value = Tensor::Scalar(loss), .label = label});
}

GradientMap Graph::Backward(NodeId loss) const {
  if (value(loss).size() != 1) {
    throw ContractError("backward needs a scalar loss, got shape " +
                        ShapeString(value(loss).shape()));
  }
  std::vector<Tensor> grads(loss.index + 1);
  grads[loss.index] = Tensor::Scalar(1.0);

  auto accumulate = [&](NodeId target) -> Tensor & {
    Tensor &g = grads[target.index];
    if (g.empty()) g = Tensor(value(target).shape());
    return g;
  };

  GradientMap result;
  for (std::size_t idx = loss.index + 1; idx-- > 0;) {
    if (grads[idx].empty()) continue;
    const Node &n = nodes_[idx];
    const Tensor &g = grads[idx];
    switch (n.op) {
      case Op::kInput:
        break;
      case Op::kParameter:
        result.grads_[NodeId{static_cast<std::uint32_t>(idx)}] = g;
        break;
      case Op::kAffine: {
        const Tensor &x = value(n.inputs[0]);
        const Tensor &w = value(n.inputs[1]);
        Tensor &gx = accumulate(n.inputs[0]);
        Tensor &gw = accumulate(n.inputs[1]);
        Tensor &gb = accumulate(n.inputs[2]);
        for (std::size_t i = 0; i < w.rows(); ++i) {
          const double gi = g[i];
          gb[i] += gi;
          if (gi == 0.0) continue;
          auto wrow = w.row(i);
          auto gwrow = gw.row(i);
          for (std::size_t j = 0; j < x.size(); ++j) {
            gwrow[j] += gi * x[j];
            gx[j] += gi * wrow[j];
          }
        }
        break;
      }
      case Op::kRelu: {
        const Tensor &x = value(n.inputs[0]);
        Tensor &gx = accumulate(n.inputs[0]);
        for (std::size_t i = 0; i < x.size(); ++i) {
          if (x[i] > 0.0) gx[i] += g[i];
        }
        break;
      }
      case Op::kSigmoid: {
        Tensor &gx = accumulate(n.inputs[0]);
        for (std::size_t i = 0; i < n.value.size(); ++i) {
          const double s = n.value[i];
          gx[i] += g[i] * s * (1.0 - s);
        }
        break;
      }
      case Op::kSoftmax: {
        // d/dx_j = s_j (g_j - sum_i g_i s_i)
        const Tensor &s = n.value;
        double dot = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) dot += g[i] * s[i];
        Tensor &gx = accumulate(n.inputs[0]);
        for (std::size_t j = 0; j < s.size(); ++j) gx[j] += s[j] * (g[j] - dot);
        break;
      }
      case Op::kMul: {
        const Tensor &a = value(n.inputs[0]);
        const Tensor &b = value(n.inputs[1]);
        // Same node on both sides (x * x) accumulates twice, as required.
        Tensor &ga = accumulate(n.inputs[0]);
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * b[i];
        Tensor &gb = accumulate(n.inputs[1]);
        for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * a[i];
        break;
      }
      case Op::kAdd:
        AddInto(accumulate(n.inputs[0]), g);
        AddInto(accumulate(n.inputs[1]), g);
        break;
      case Op::kConcat: {
        std::size_t offset = 0;
        for (NodeId in : n.inputs) {
          Tensor &gi = accumulate(in);
          for (std::size_t k = 0; k < gi.size(); ++k) gi[k] += g[offset + k];
          offset += gi.size();
        }
        break;
      }
      case Op::kStack: {
        for (std::size_t r = 0; r < n.inputs.size(); ++r) {
          Tensor &gi = accumulate(n.inputs[r]);
          auto src = g.row(r);
          for (std::size_t k = 0; k < gi.size(); ++k) gi[k] += src[k];
        }
        break;
      }
      case Op::kGather: {
        Tensor &gt = accumulate(n.inputs[0]);
        for (std::size_t r = 0; r < n.rows.size(); ++r) {
          auto dst = gt.row(n.rows[r]);
          auto src = g.row(r);
          for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
        }
        break;
      }
      case Op::kRow: {
        auto dst = accumulate(n.inputs[0]).row(n.rows[0]);
        for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += g[k];
        break;
      }
      case Op::kRowMean: {
        Tensor &gm = accumulate(n.inputs[0]);
        const double scale = 1.0 / static_cast<double>(gm.rows());
        for (std::size_t r = 0; r < gm.rows(); ++r) {
          auto dst = gm.row(r);
          for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += g[k] * scale;
        }
        break;
      }
      case Op::kWeightedSum: {
        const Tensor &w = value(n.inputs[0]);
        const Tensor &m = value(n.inputs[1]);
        Tensor &gw = accumulate(n.inputs[0]);
        Tensor &gm = accumulate(n.inputs[1]);
        for (std::size_t r = 0; r < m.rows(); ++r) {
          auto src = m.row(r);
          auto dst = gm.row(r);
          double dot = 0.0;
          for (std::size_t k = 0; k < m.cols(); ++k) {
            dot += g[k] * src[k];
            dst[k] += g[k] * w[r];
          }
          gw[r] += dot;
        }
        break;
      }
      case Op::kBce: {
        const double p = value(n.inputs[0])[0];
        double dp = 0.0;
        if (p > kProbabilityEpsilon && p < 1.0 - kProbabilityEpsilon) {
          dp = n.label == 1 ? -1.0 / p : 1.0 / (1.0 - p);
        }
        accumulate(n.inputs[0])[0] += g[0] * dp;
        break;
      }
    }
  }
  return result;
}

}  // namespace vcc
