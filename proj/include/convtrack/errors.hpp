// Copyright 2026 The convtrack Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace convtrack {

// Non-finite or otherwise unusable state vector.
class InvalidStateError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Failed factorization, singular innovation covariance and similar.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Bad argument or inconsistent input data (mismatched sequences, bad config).
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration file or flag value; names the offending field.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string & what)
  : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

}  // namespace convtrack
