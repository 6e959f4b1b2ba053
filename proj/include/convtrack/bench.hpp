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

#include "convtrack/tracker.hpp"

namespace convtrack {

struct LatencyStats
{
  double mean_ms = 0.0;
  double p99_ms = 0.0;
  long samples = 0;
};

struct BenchReport
{
  LatencyStats ukf;
  LatencyStats conv;
  Method conv_method = Method::kConvAdaptive;
  double ratio = 0.0;  // conv mean / ukf mean
};

/// Times predict + update cycles on an 11-state CTRA track with box
/// measurements, alternating the two filters in blocks.
BenchReport bench_filters(long iterations, Method conv_method = Method::kConvAdaptive, double gamma = kDefaultGamma,
  std::uint64_t seed = 1);

}  // namespace convtrack
