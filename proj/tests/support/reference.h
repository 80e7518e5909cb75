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

#ifndef VCC_TESTS_SUPPORT_REFERENCE_H_
#define VCC_TESTS_SUPPORT_REFERENCE_H_

#include <string>
#include <vector>

#include "vcc/dataset.h"
#include "vcc/model.h"

// Straight-line scalar re-implementation of the model maths, written
// without the graph or tensor kernels, used as an oracle.
namespace vcc::testing::ref {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

Vec Row(const Tensor &m, std::size_t r);
Mat Rows(const Tensor &m);
Vec Concat(const std::vector<Vec> &parts);
Vec Mean(const Mat &rows);
Vec Softmax(const Vec &v);
double Sigmoid(double x);
// w2 . relu(w1 x + b1) + b2
double FeedForward(const FeedForward &net, const Vec &x);

Vec TokenRow(const VccParameters &p, const std::string &token);
Mat EventTokens(const VccParameters &p, const Event &e);
Vec ObjectVector(const VccParameters &p, const std::string &word);

Vec Context(const VccParameters &p, const Mat &tokens, const Mat &objects);
Vec EventVector(const VccParameters &p, const Vec &context, const Mat &tokens);

double Vcc(const VccParameters &p, const Event &e1, const Event &e2,
           const std::vector<std::string> &objects);
double NoContext(const VccParameters &p, const Event &e1, const Event &e2);
double NoAttention(const VccParameters &p, const Event &e1, const Event &e2,
                   const std::vector<std::string> &objects);
double FeatureContext(const VccParameters &p, const Event &e1, const Event &e2,
                      const Vec &feature);

double Bce(double p, int label);

}  // namespace vcc::testing::ref

#endif  // VCC_TESTS_SUPPORT_REFERENCE_H_
