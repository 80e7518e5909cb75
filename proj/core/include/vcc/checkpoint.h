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

#ifndef VCC_CHECKPOINT_H_
#define VCC_CHECKPOINT_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "vcc/model.h"

namespace vcc {

inline constexpr int kCheckpointFormatVersion = 1;

// Self-describing JSON document: format_version, variant, d, h, m,
// feature_width, embedding_trainable, vocabulary and every parameter tensor
// as {name, shape, data}. Numbers use the shortest decimal form that reads
// back to the same double, so a save/load cycle is bit-exact.
std::string SerializeCheckpoint(const VccParameters &params);
VccParameters DeserializeCheckpoint(std::string_view text);

void SaveCheckpoint(const std::filesystem::path &path,
                    const VccParameters &params);
VccParameters LoadCheckpoint(const std::filesystem::path &path);

}  // namespace vcc

#endif  // VCC_CHECKPOINT_H_
