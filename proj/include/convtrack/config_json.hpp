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
#include <filesystem>
#include <string>

#include "json.hpp"

#include "convtrack/metrics.hpp"
#include "convtrack/sim.hpp"
#include "convtrack/tracker.hpp"

namespace convtrack {

/// Everything a CLI run can be configured with. Missing JSON fields keep
/// these defaults; unknown fields are rejected.
struct AppConfig
{
  std::uint64_t seed = 0;
  ScenarioConfig scenario = ScenarioConfig::defaults();
  TrackerConfig tracker = TrackerConfig::defaults();
  Method method = Method::kConvAdaptive;
  double gamma = kDefaultGamma;
  double tau = kDefaultTau;
  double a = 1.0;
  std::string type = "Car";
  double eval_iou = kEvalIou;
  int recall_levels = kRecallLevels;
  long bench_iterations = 100000;

  /// Pushes seed and method settings down into scenario and tracker.
  void apply();
  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

/// Reads a JSON object over the defaults. Throws ConfigError.
AppConfig config_from_json(const nlohmann::json & j);
AppConfig load_config(const std::filesystem::path & path);

/// Canonical JSON of every field, keys sorted.
nlohmann::json config_to_json(const AppConfig & config);

/// 64-bit FNV-1a of the canonical JSON text, as 16 hex digits.
std::string config_hash(const AppConfig & config);
std::uint64_t fnv1a64(const std::string & bytes);

}  // namespace convtrack
