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

#ifndef VCC_ERRORS_H_
#define VCC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace vcc {

// Base class for every error raised by the library. The subclasses let
// callers (notably the command-line tool) map failures onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor shapes do not conform.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Violated API contract (e.g. backward from a non-scalar node).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Malformed input text. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string &message, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message
                       : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Well-formed input that breaks a data invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Requested key is absent.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Inconsistent or infeasible configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Score file does not cover every (query, candidate) combination.
class CoverageError : public Error {
 public:
  using Error::Error;
};

// Non-finite value encountered during training or evaluation.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace vcc

#endif  // VCC_ERRORS_H_
