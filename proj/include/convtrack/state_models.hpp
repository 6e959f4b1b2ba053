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

namespace convtrack {

inline constexpr int kStateDim = 11;
inline constexpr int kMeasDim = 7;

using StateVector = Eigen::Matrix<double, kStateDim, 1>;
using MeasVector = Eigen::Matrix<double, kMeasDim, 1>;

// Component layout of the 11-dimensional track state. The first seven
// entries coincide with the measured box, so h(x) is a plain projection.
namespace idx {
inline constexpr int kPx = 0;
inline constexpr int kPy = 1;
inline constexpr int kPz = 2;
inline constexpr int kYaw = 3;
inline constexpr int kLength = 4;
inline constexpr int kWidth = 5;
inline constexpr int kHeight = 6;
inline constexpr int kSpeed = 7;       // horizontal speed along the heading
inline constexpr int kClimb = 8;       // vertical speed
inline constexpr int kAccel = 9;       // horizontal acceleration
inline constexpr int kYawRate = 10;
}  // namespace idx

// Yaw rates below this magnitude use the analytic zero-turn limit of CTRA.
inline constexpr double kYawRateEpsilon = 1e-6;

struct Detection
{
  double px = 0.0;
  double py = 0.0;
  double pz = 0.0;
  double yaw = 0.0;
  double l = 1.0;
  double w = 1.0;
  double h = 1.0;
  double score = 1.0;

  MeasVector to_vector() const;
  static Detection from_vector(const MeasVector & y, double score = 1.0);
};

// Process (Q) and measurement (R) noise covariances. Q must be PSD and R PD.
struct NoiseSpec
{
  Eigen::MatrixXd Q;
  Eigen::MatrixXd R;
};

enum class MotionModelKind { kCV, kCTRA };

/// Wraps an angle to (-pi, pi].
double normalize_angle(double a);

/// (a - b) wrapped to (-pi, pi].
double angle_residual(double a, double b);

/// Constant turn rate and acceleration transition. Throws InvalidStateError
/// on non-finite input or non-positive dt.
StateVector ctra_predict(const StateVector & state, double dt);

/// Heading-aligned constant velocity transition; rates and extents are kept.
StateVector cv_predict(const StateVector & state, double dt);

StateVector motion_predict(MotionModelKind kind, const StateVector & state, double dt);

/// h(x): the first seven components as a box, score 1.
Detection measurement_project(const StateVector & state);

/// State built from a detection with all rates zero.
StateVector state_from_detection(const Detection & det);

bool is_finite(const StateVector & state);

/// Throws InvalidStateError unless the detection satisfies the box invariants.
void validate_detection(const Detection & det);

}  // namespace convtrack
