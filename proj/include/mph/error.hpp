// Copyright 2026 The mph Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mph {

enum class ErrorCode {
  invalid_argument,
  precondition,
  invalid_state,
  not_cyclic,
  not_holonomic,
  unsupported_structure,
  cap_exceeded,
  parse,
  config,
  internal,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::invalid_state: return "invalid-state";
    case ErrorCode::not_cyclic: return "not-cyclic";
    case ErrorCode::not_holonomic: return "not-holonomic";
    case ErrorCode::unsupported_structure: return "unsupported-structure";
    case ErrorCode::cap_exceeded: return "cap-exceeded";
    case ErrorCode::parse: return "parse";
    case ErrorCode::config: return "config";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

/// Base error for every failure raised by the library. The code is stable and
/// machine readable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace mph
