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

#include "convtrack/state_models.hpp"

#include <cmath>
#include <numbers>

#include "convtrack/errors.hpp"

namespace convtrack {

namespace {

// Integrals over u in [0, 1] of cos(theta u), sin(theta u), u cos(theta u)
// and u sin(theta u). Below the series threshold the closed forms lose
// digits to cancellation, so the Taylor expansions take over.
struct TurnIntegrals
{
  double c0;
  double s0;
  double c1;
  double s1;
};

TurnIntegrals turn_integrals(double theta)
{
  const double t2 = theta * theta;
  if (std::abs(theta) < 1e-3) {
    return {
      1.0 - t2 / 6.0 + t2 * t2 / 120.0,
      theta / 2.0 - theta * t2 / 24.0 + theta * t2 * t2 / 720.0,
      0.5 - t2 / 8.0 + t2 * t2 / 144.0,
      theta / 3.0 - theta * t2 / 30.0 + theta * t2 * t2 / 840.0,
    };
  }
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double half = std::sin(0.5 * theta);
  const double one_minus_cos = 2.0 * half * half;
  return {
    s / theta,
    one_minus_cos / theta,
    (theta * s - one_minus_cos) / t2,
    (s - theta * c) / t2,
  };
}

void require_finite(const StateVector & state, const char * where)
{
  if (!is_finite(state)) {
    throw InvalidStateError(std::string(where) + ": non-finite state");
  }
}

void require_positive_dt(double dt, const char * where)
{
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvalidStateError(std::string(where) + ": dt must be positive");
  }
}

}  // namespace

MeasVector Detection::to_vector() const
{
  MeasVector y;
  y << px, py, pz, yaw, l, w, h;
  return y;
}

Detection Detection::from_vector(const MeasVector & y, double score)
{
  return Detection{y(0), y(1), y(2), y(3), y(4), y(5), y(6), score};
}

double normalize_angle(double a)
{
  constexpr double pi = std::numbers::pi;
  double r = std::remainder(a, 2.0 * pi);  // in [-pi, pi]
  if (r <= -pi) {
    r += 2.0 * pi;
  }
  return r;
}

double angle_residual(double a, double b) { return normalize_angle(a - b); }

bool is_finite(const StateVector & state) { return state.allFinite(); }

StateVector ctra_predict(const StateVector & state, double dt)
{
  require_finite(state, "ctra_predict");
  require_positive_dt(dt, "ctra_predict");

  const double yaw = state(idx::kYaw);
  const double v = state(idx::kSpeed);
  const double a = state(idx::kAccel);
  const double yaw_rate = state(idx::kYawRate);
  const double cy = std::cos(yaw);
  const double sy = std::sin(yaw);

  double dx = 0.0;
  double dy = 0.0;
  if (std::abs(yaw_rate) < kYawRateEpsilon) {
    const double dist = v * dt + 0.5 * a * dt * dt;
    dx = dist * cy;
    dy = dist * sy;
  } else {
    // Same quantity as the textbook CTRA increments
    //   [(v + a dt) w sin(yaw + w dt) - v w sin(yaw)
    //    + a cos(yaw + w dt) - a cos(yaw)] / w^2
    // written as integrals of the rotated speed profile so that small w
    // does not cancel catastrophically.
    const TurnIntegrals k = turn_integrals(yaw_rate * dt);
    const double along_c = v * k.c0 + a * dt * k.c1;
    const double along_s = v * k.s0 + a * dt * k.s1;
    dx = dt * (cy * along_c - sy * along_s);
    dy = dt * (sy * along_c + cy * along_s);
  }

  StateVector out = state;
  out(idx::kPx) += dx;
  out(idx::kPy) += dy;
  out(idx::kPz) += state(idx::kClimb) * dt;
  out(idx::kYaw) = normalize_angle(yaw + yaw_rate * dt);
  out(idx::kSpeed) += a * dt;
  return out;
}

StateVector cv_predict(const StateVector & state, double dt)
{
  require_finite(state, "cv_predict");
  require_positive_dt(dt, "cv_predict");

  StateVector out = state;
  const double v = state(idx::kSpeed);
  out(idx::kPx) += v * std::cos(state(idx::kYaw)) * dt;
  out(idx::kPy) += v * std::sin(state(idx::kYaw)) * dt;
  out(idx::kPz) += state(idx::kClimb) * dt;
  return out;
}

StateVector motion_predict(MotionModelKind kind, const StateVector & state, double dt)
{
  return kind == MotionModelKind::kCTRA ? ctra_predict(state, dt) : cv_predict(state, dt);
}

Detection measurement_project(const StateVector & state)
{
  require_finite(state, "measurement_project");
  return Detection::from_vector(state.head<kMeasDim>(), 1.0);
}

StateVector state_from_detection(const Detection & det)
{
  StateVector x = StateVector::Zero();
  x.head<kMeasDim>() = det.to_vector();
  x(idx::kYaw) = normalize_angle(det.yaw);
  return x;
}

void validate_detection(const Detection & det)
{
  if (!det.to_vector().allFinite() || !std::isfinite(det.score)) {
    throw InvalidStateError("detection has non-finite fields");
  }
  if (!(det.l > 0.0 && det.w > 0.0 && det.h > 0.0)) {
    throw InvalidStateError("detection extents must be positive");
  }
}

}  // namespace convtrack
