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

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace convtrack {

struct SuiteResult
{
  std::string name;
  bool passed = true;
  long checks = 0;
  long failures = 0;
  double worst = 0.0;  // largest error against the suite tolerance
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string detail;  // first failure, if any
};

using ClosedFormLikelihood = std::function<double(
  const Eigen::VectorXd &, const Eigen::VectorXd &, const Eigen::MatrixXd &, double)>;

struct VerifyOptions
{
  std::string suite;  // empty runs every suite
  std::uint64_t seed = 12345;
  /// Replaces the closed-form likelihood under test (mutation checks).
  ClosedFormLikelihood closed_form;
};

/// likelihood, conjugate, linear, sigma, hungarian, iou, ctra, metrics, bounds, adapt
const std::vector<std::string> & suite_names();

/// Throws InputError for an unknown suite name.
SuiteResult run_suite(const std::string & name, const VerifyOptions & options = {});
std::vector<SuiteResult> run_verify(const VerifyOptions & options = {});

}  // namespace convtrack
