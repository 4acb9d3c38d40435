// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace chatweave {

/// Base class for all chatweave errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A malformed input record. Carries the 1-based line number when known.
struct ParseError : Error {
    ParseError(std::string message, long line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
          line_number(line) {}

    long line_number = 0;
};

struct ConfigError : Error {
    using Error::Error;
};

/// Remote service unreachable or returned a non-200 status.
struct TransportError : Error {
    using Error::Error;
};

struct SizeLimitError : Error {
    using Error::Error;
};

/// A precondition violation, e.g. empty text where content is required.
struct InvalidArgumentError : Error {
    using Error::Error;
};

struct InsufficientDataError : Error {
    using Error::Error;
};

}  // namespace chatweave
