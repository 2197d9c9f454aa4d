// Copyright 2026 The pwave Authors
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

#ifndef PWAVE_ERRORS_HPP
#define PWAVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pwave {

// Base class for every error raised by the library. The CLI maps these to
// exit codes, so new error types should derive from one of the categories
// below rather than from std::exception directly.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid parameters, out-of-range values, mismatched dimensions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class IndexOutOfRange : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class EmptyProfile : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class InvalidRange : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class GeometryMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class NonCompactPattern : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A min-spacing source map could not be placed within the retry budget.
class InfeasibleSpacing : public Error {
 public:
  using Error::Error;
};

// A neuron was asked to store more traces than its configured capacity.
// Signals that the run must abort; silently dropping traces would corrupt
// trained wave patterns undetectably.
class MemoryCapacityExceeded : public Error {
 public:
  using Error::Error;
};

// Raised by training when endogenous activity dies out while the source
// pattern is still clamped.
class WaveDamped : public Error {
 public:
  using Error::Error;
};

// Raised by training when no stable wave emerged within the emission budget.
class NotConverged : public Error {
 public:
  using Error::Error;
};

// Config file errors carry the offending line number.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  explicit ConfigError(const std::string& what) : Error(what), line_(0) {}
  int line() const { return line_; }

 private:
  int line_;
};

class UnknownKey : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class DuplicateKey : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class TypeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class RangeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace pwave

#endif  // PWAVE_ERRORS_HPP
