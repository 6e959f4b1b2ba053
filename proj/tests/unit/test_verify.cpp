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

#include <gtest/gtest.h>

#include <algorithm>

#include "convtrack/errors.hpp"
#include "convtrack/filter.hpp"
#include "convtrack/likelihood.hpp"
#include "convtrack/verify.hpp"

using namespace convtrack;

TEST(Verify, SuiteNames)
{
  const auto & names = suite_names();
  for (const char * expected : {"likelihood", "conjugate", "linear", "sigma", "hungarian", "iou", "ctra", "metrics",
         "bounds", "adapt"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), expected), names.end()) << expected;
  }
}

TEST(Verify, SingleSuiteFilter)
{
  VerifyOptions opt;
  opt.suite = "likelihood";
  const auto results = run_verify(opt);
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].name, "likelihood");
  EXPECT_TRUE(results[0].passed) << results[0].detail;
  EXPECT_GT(results[0].checks, 0);
}

TEST(Verify, UnknownSuite)
{
  EXPECT_THROW(run_suite("nonsense"), InputError);
}

TEST(Verify, FlippedInflationSignFailsLikelihoodSuite)
{
  VerifyOptions opt;
  opt.closed_form = [](const Eigen::VectorXd & y, const Eigen::VectorXd & mean, const Eigen::MatrixXd & R,
                      double gamma) {
    Eigen::MatrixXd cov = R;
    cov.diagonal().array() -= inflation_term(gamma);
    // keep the mutant evaluable; a non-PD covariance would fail for the wrong reason
    cov.diagonal() = cov.diagonal().cwiseMax(1e-3);
    return gaussian_density(y, mean, cov);
  };
  const SuiteResult r = run_suite("likelihood", opt);
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.failures, 0);
  EXPECT_FALSE(r.detail.empty());
}

TEST(Verify, MetricsAndBoundsSuitesPass)
{
  for (const char * name : {"metrics", "bounds", "adapt", "sigma"}) {
    const SuiteResult r = run_suite(name);
    EXPECT_TRUE(r.passed) << name << ": " << r.detail;
  }
}
