// Copyright 2026 The Rasm Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef RASM_ERROR_HPP
#define RASM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rasm {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Image or matrix shapes do not line up.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& msg) : Error(msg) {}
};

// A configuration value violates its documented constraints.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Malformed input data (bad UTF-8, bad file magic, truncated payload...).
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& msg) : Error(msg) {}
};

// Caller broke an API contract (unknown node id, mismatched supports...).
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& msg) : Error(msg) {}
};

// Filesystem and stream failures.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace rasm

#endif  // RASM_ERROR_HPP
