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

// Slow, independent reference computations used by `convtrack verify` and the
// test suites. Nothing in the tracking pipeline depends on this header.

#include <Eigen/Core>
#include <functional>
#include <utility>
#include <vector>

#include "convtrack/association.hpp"
#include "convtrack/bounds.hpp"
#include "convtrack/metrics.hpp"
#include "convtrack/rng.hpp"
#include "convtrack/state_models.hpp"

namespace convtrack::oracle {

/// Minimum total cost over all one-to-one assignments of min(rows, cols)
/// pairs, by enumerating permutations.
double brute_force_min_cost(const Eigen::MatrixXd & cost);
double assignment_cost(const Eigen::MatrixXd & cost, const std::vector<std::pair<int, int>> & pairs);

bool point_in_box(const Box3D & box, const Eigen::Vector3d & p);
/// IoU estimated from `samples` uniform points inside `a`.
double iou_monte_carlo(const Box3D & a, const Box3D & b, long samples, CounterRng & rng);

struct Gaussian
{
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Textbook Kalman predict + update for x' = F x + w, y = H x + v.
Gaussian kalman_step(
  const Gaussian & prior, const Eigen::MatrixXd & F, const Eigen::MatrixXd & Q, const Eigen::MatrixXd & H,
  const Eigen::MatrixXd & R, const Eigen::VectorXd & y);

using Transition = std::function<Eigen::VectorXd(const Eigen::VectorXd &)>;
using Observation = std::function<Eigen::VectorXd(const Eigen::VectorXd &)>;

/// Unscented predict + update with Julier points, written as explicit sums.
Gaussian reference_ukf_step(
  const Gaussian & prior, const Transition & f, const Eigen::MatrixXd & Q, const Observation & h,
  const Eigen::MatrixXd & R, const Eigen::VectorXd & y, double a);

/// CTRA kinematics integrated with classical Runge-Kutta.
StateVector ctra_rk4(const StateVector & state, double dt, int substeps);

/// Random bound assumptions that pass BoundAssumptions::validate and keep
/// the predicted covariance bound above p_l.
BoundAssumptions random_consistent_assumptions(CounterRng & rng);

/// One object over three frames, tracked in the first and last only.
struct MetricsFixture
{
  std::vector<GtFrame> gt;
  std::vector<HypFrame> hyp;
};
MetricsFixture fixture_three_frame();
/// Two objects over five frames; object B is offset by half a box (IoU 1/3)
/// and a far away false positive appears in frame 2.
MetricsFixture fixture_five_frame();

}  // namespace convtrack::oracle
