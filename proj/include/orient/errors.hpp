// Copyright (C) 2026 The orient authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace orient {

// Base class for every error thrown by this library. The CLI maps
// subclasses onto process exit codes (see tools/).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite or non-positive box parameters.
class InvalidBoxError : public Error {
 public:
  using Error::Error;
};

// Degenerate, non-convex, or otherwise unusable polygon input.
class InvalidPolygonError : public Error {
 public:
  using Error::Error;
};

// Out-of-range thresholds, malformed configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Mismatched vector lengths in codec operations.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Input text that yields no usable records.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Unreadable stream, missing file or directory.
class IoError : public Error {
 public:
  using Error::Error;
};

// Scene construction could not satisfy its constraints.
class GenerationError : public Error {
 public:
  using Error::Error;
};

// Evaluation over zero defined classes.
class EmptyEvaluationError : public Error {
 public:
  using Error::Error;
};

// A broken internal invariant; indicates a bug, not bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace orient
