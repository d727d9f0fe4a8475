// Copyright 2026 The SAQAM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SAQAM_UTIL_ERRORS_HPP_
#define SAQAM_UTIL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace saqam {

// I/O failures: unreadable files, short reads, missing paths.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error("io error: " + msg) {}
};

// Structurally valid I/O but an encoding we do not handle.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& msg) : std::runtime_error("format error: " + msg) {}
};

// An argument outside its documented domain.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& msg) : std::invalid_argument("domain error: " + msg) {}
};

// Inputs that are well-typed but unusable (empty pools, degenerate signals).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error("data error: " + msg) {}
};

// Configuration that fails schema validation; `key` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& key, const std::string& msg)
      : std::runtime_error("config error at '" + key + "': " + msg), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// NaN/Inf encountered where finite values are required.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error("numeric error: " + msg) {}
};

// API misuse between modules (mismatched stacks, shape disagreements).
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& msg) : std::logic_error("contract error: " + msg) {}
};

}  // namespace saqam

#endif  // SAQAM_UTIL_ERRORS_HPP_
