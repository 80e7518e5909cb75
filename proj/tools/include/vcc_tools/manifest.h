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

#ifndef VCC_TOOLS_MANIFEST_H_
#define VCC_TOOLS_MANIFEST_H_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace vcc::tools {

// Lowercase hex SHA-256 of a file's bytes.
std::string Sha256File(const std::filesystem::path &path);

struct InputDigest {
  std::string path;
  std::string sha256;
};

// Record of one CLI run: enough to repeat it.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  std::vector<InputDigest> inputs;
  std::vector<std::string> outputs;
  double wall_clock_seconds = 0.0;

  void AddInput(const std::filesystem::path &path);
  nlohmann::ordered_json ToJson() const;
  void Save(const std::filesystem::path &path) const;
};

}  // namespace vcc::tools

#endif  // VCC_TOOLS_MANIFEST_H_
