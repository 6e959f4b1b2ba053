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

#include <cstdint>
#include <limits>

namespace convtrack {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Purposes of the independent random streams derived from one seed.
enum class Stream : std::uint64_t {
  kMotion = 1,
  kMeasurement = 2,
  kContamination = 3,
  kFalsePositive = 4,
  kInitialError = 5,
  kScenarioInit = 6,
  kTest = 7,
};

/// Counter-based generator: output n is mix64(key + n * golden), so a stream
/// is fully determined by (seed, purpose, index) and can be recreated at any
/// point. Satisfies UniformRandomBitGenerator.
class CounterRng
{
public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) : key_(key) {}
  CounterRng(std::uint64_t seed, Stream purpose, std::uint64_t index = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  std::uint64_t counter() const { return counter_; }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace convtrack
