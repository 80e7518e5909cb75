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

#ifndef VCC_TEXT_UTIL_H_
#define VCC_TEXT_UTIL_H_

#include <string>
#include <string_view>
#include <vector>

namespace vcc {

// ASCII lowercasing; bytes outside ASCII pass through unchanged.
std::string Lowercase(std::string_view text);

// Lowercases and splits on runs of whitespace.
std::vector<std::string> Tokenize(std::string_view text);

std::string Join(const std::vector<std::string> &parts, std::string_view sep);

std::string Trim(std::string_view text);

}  // namespace vcc

#endif  // VCC_TEXT_UTIL_H_
