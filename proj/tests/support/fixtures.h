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

#ifndef VCC_TESTS_SUPPORT_FIXTURES_H_
#define VCC_TESTS_SUPPORT_FIXTURES_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "vcc/dataset.h"
#include "vcc/model.h"
#include "vcc/rng.h"

namespace vcc::testing {

std::vector<VoteLabel> Votes(int causal);  // `causal` of five, rest mixed

// Video with events e00..e(n-1) spread over `pairs` image pairs.
// `positives` cause/effect candidates get 5/5 (or 4/5 every third one)
// with-context causal votes; negatives get 3/5 and 0/5.
VideoRecord SyntheticVideo(const std::string &id, Split split,
                           const std::string &category, std::size_t events,
                           std::size_t pairs, std::size_t positives);

// Reproduces the published corpus statistics:
// 800/100/100 videos of 4 pairs, 2599/329/282 positives and mean candidate
// lists of 31.8/32.1/32.2.
Dataset CorpusFixture();

// Random parameters for `variant` with entries uniform in [-scale, scale]
// over a vocabulary of `tokens` words "w0".."wN".
VccParameters RandomParameters(Variant variant, std::size_t d, std::size_t h,
                               std::size_t tokens, std::size_t feature_width,
                               double scale, Rng &rng);

// Event of 1..max_tokens random tokens from "w0".."w(tokens-1)".
Event RandomEvent(const std::string &id, std::size_t tokens,
                  std::size_t max_tokens, Rng &rng);
// 0..max_objects random object words, some of them two tokens long.
std::vector<std::string> RandomObjects(std::size_t tokens,
                                       std::size_t max_objects, Rng &rng);

// Fresh empty directory under the system temp dir.
std::filesystem::path TempDir(const std::string &name);

std::string ReadFile(const std::filesystem::path &path);

}  // namespace vcc::testing

#endif  // VCC_TESTS_SUPPORT_FIXTURES_H_
