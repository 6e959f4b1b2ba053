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

#include <cmath>
#include <numbers>
#include <random>

#include "convtrack/errors.hpp"
#include "convtrack/oracles.hpp"
#include "convtrack/rng.hpp"
#include "convtrack/state_models.hpp"

using namespace convtrack;

namespace {

StateVector parked()
{
  StateVector x = StateVector::Zero();
  x << 1.0, 2.0, 3.0, 0.1, 4.0, 2.0, 1.5, 0.0, 0.0, 0.0, 0.0;
  return x;
}

StateVector random_state(CounterRng & rng)
{
  auto u = [&rng](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  StateVector x;
  x << u(-50, 50), u(-50, 50), u(0, 2), u(-3.1, 3.1), u(1, 5), u(1, 3), u(1, 2), u(-20, 20), u(-1, 1), u(-3, 3),
    u(-1, 1);
  return x;
}

}  // namespace

TEST(Ctra, ZeroRatesLeaveStateUnchanged)
{
  const StateVector x = parked();
  EXPECT_EQ(ctra_predict(x, 0.37), x);
}

TEST(Ctra, VerticalMotionIsDecoupled)
{
  StateVector x = parked();
  x(idx::kClimb) = 2.0;
  StateVector expected = x;
  expected(idx::kPz) += 1.0;
  EXPECT_TRUE(ctra_predict(x, 0.5).isApprox(expected, 1e-15));
}

TEST(Ctra, MatchesFineRungeKutta)
{
  StateVector x = StateVector::Zero();
  x(idx::kYaw) = 0.3;
  x(idx::kSpeed) = 5.0;
  x(idx::kAccel) = 1.0;
  x(idx::kYawRate) = 0.4;
  x(idx::kLength) = x(idx::kWidth) = x(idx::kHeight) = 1.0;
  const StateVector got = ctra_predict(x, 0.1);
  const StateVector ref = oracle::ctra_rk4(x, 0.1, 1000);
  EXPECT_NEAR(got(idx::kPx), ref(idx::kPx), 1e-8);
  EXPECT_NEAR(got(idx::kPy), ref(idx::kPy), 1e-8);
  EXPECT_NEAR(got(idx::kYaw), ref(idx::kYaw), 1e-12);
  EXPECT_NEAR(got(idx::kSpeed), ref(idx::kSpeed), 1e-12);
}

TEST(Ctra, MatchesRungeKuttaOnRandomStates)
{
  CounterRng rng(7, Stream::kTest);
  for (int k = 0; k < 1000; ++k) {
    const StateVector x = random_state(rng);
    const double dt = 0.001 + 0.099 * rng.uniform();
    const StateVector got = ctra_predict(x, dt);
    const StateVector ref = oracle::ctra_rk4(x, dt, 100);
    StateVector diff = got - ref;
    diff(idx::kYaw) = angle_residual(got(idx::kYaw), ref(idx::kYaw));
    ASSERT_LT(diff.cwiseAbs().maxCoeff(), 1e-6) << "state " << k;
  }
}

TEST(Ctra, ContinuousAcrossYawRateSwitch)
{
  CounterRng rng(11, Stream::kTest);
  for (int k = 0; k < 200; ++k) {
    StateVector below = random_state(rng);
    StateVector above = below;
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    below(idx::kYawRate) = sign * kYawRateEpsilon * (1.0 - 1e-9);
    above(idx::kYawRate) = sign * kYawRateEpsilon * (1.0 + 1e-9);
    StateVector diff = ctra_predict(below, 0.1) - ctra_predict(above, 0.1);
    diff(idx::kYaw) = angle_residual(ctra_predict(below, 0.1)(idx::kYaw), ctra_predict(above, 0.1)(idx::kYaw));
    ASSERT_LT(diff.cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Ctra, StableForTinyTurnAngles)
{
  // closed form (sin - ...)/theta^2 cancels badly here; the result must stay
  // close to the straight-line limit
  StateVector x = parked();
  x(idx::kSpeed) = 30.0;
  x(idx::kAccel) = 2.0;
  x(idx::kYawRate) = 2e-6;
  const StateVector ref = oracle::ctra_rk4(x, 0.1, 1000);
  EXPECT_NEAR(ctra_predict(x, 0.1)(idx::kPx), ref(idx::kPx), 1e-10);
  EXPECT_NEAR(ctra_predict(x, 0.1)(idx::kPy), ref(idx::kPy), 1e-10);
}

TEST(Ctra, ExtentsAreFixedPoints)
{
  CounterRng rng(3, Stream::kTest);
  for (int k = 0; k < 100; ++k) {
    const StateVector x = random_state(rng);
    const StateVector a = ctra_predict(x, 0.1);
    const StateVector b = cv_predict(x, 0.1);
    for (int e = idx::kLength; e <= idx::kHeight; ++e) {
      EXPECT_EQ(a(e), x(e));
      EXPECT_EQ(b(e), x(e));
    }
  }
}

TEST(Ctra, YawIsNormalized)
{
  StateVector x = parked();
  x(idx::kYaw) = 3.1;
  x(idx::kYawRate) = 2.0;
  const double yaw = ctra_predict(x, 0.1)(idx::kYaw);
  EXPECT_GT(yaw, -std::numbers::pi);
  EXPECT_LE(yaw, std::numbers::pi);
  EXPECT_NEAR(yaw, 3.3 - 2.0 * std::numbers::pi, 1e-12);
}

TEST(Ctra, RejectsBadInput)
{
  StateVector x = parked();
  EXPECT_THROW(ctra_predict(x, 0.0), InvalidStateError);
  EXPECT_THROW(ctra_predict(x, -0.1), InvalidStateError);
  x(idx::kSpeed) = std::nan("");
  EXPECT_THROW(ctra_predict(x, 0.1), InvalidStateError);
  x(idx::kSpeed) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(cv_predict(x, 0.1), InvalidStateError);
}

TEST(ConstantVelocity, ZeroVelocityIsIdentity) { EXPECT_EQ(cv_predict(parked(), 1.0), parked()); }

TEST(ConstantVelocity, MovesAlongHeading)
{
  StateVector x = StateVector::Zero();
  x(idx::kSpeed) = 2.0;
  EXPECT_DOUBLE_EQ(cv_predict(x, 1.0)(idx::kPx), 2.0);
  x(idx::kYaw) = std::numbers::pi / 2.0;
  const StateVector y = cv_predict(x, 1.0);
  EXPECT_NEAR(y(idx::kPy), 2.0, 1e-12);
  EXPECT_NEAR(y(idx::kPx), 0.0, 1e-12);
  EXPECT_EQ(y(idx::kYaw), x(idx::kYaw));
}

TEST(Measurement, ProjectsFirstSevenComponents)
{
  StateVector x = parked();
  x.tail<4>() << 3.0, 0.2, -1.0, 0.3;
  const Detection d = measurement_project(x);
  EXPECT_EQ(d.px, 1.0);
  EXPECT_EQ(d.py, 2.0);
  EXPECT_EQ(d.pz, 3.0);
  EXPECT_EQ(d.yaw, 0.1);
  EXPECT_EQ(d.l, 4.0);
  EXPECT_EQ(d.w, 2.0);
  EXPECT_EQ(d.h, 1.5);
  EXPECT_EQ(d.score, 1.0);
}

TEST(Measurement, RoundTripThroughState)
{
  const Detection d{1.5, -2.0, 0.7, -0.4, 3.9, 1.6, 1.5, 1.0};
  const Detection back = measurement_project(state_from_detection(d));
  EXPECT_EQ(back.to_vector(), d.to_vector());
  EXPECT_TRUE(state_from_detection(d).tail<4>().isZero());
}

TEST(Angles, ResidualExamples)
{
  EXPECT_NEAR(angle_residual(0.1, -0.1), 0.2, 1e-15);
  EXPECT_NEAR(angle_residual(std::numbers::pi - 0.05, -std::numbers::pi + 0.05), -0.1, 1e-12);
  for (double x : {-10.0, -3.0, 0.0, 1.0, 3.14159, 42.0}) {
    EXPECT_EQ(angle_residual(x, x), 0.0);
  }
}

TEST(Angles, ResidualRangeAndAntisymmetry)
{
  CounterRng rng(5, Stream::kTest);
  for (int k = 0; k < 10000; ++k) {
    const double a = (rng.uniform() - 0.5) * 40.0;
    const double b = (rng.uniform() - 0.5) * 40.0;
    const double r = angle_residual(a, b);
    ASSERT_GT(r, -std::numbers::pi);
    ASSERT_LE(r, std::numbers::pi);
    if (std::abs(std::abs(r) - std::numbers::pi) > 1e-9) {
      ASSERT_NEAR(r, -angle_residual(b, a), 1e-12);
    }
  }
}

TEST(Angles, NormalizeMapsMinusPiToPi)
{
  EXPECT_EQ(normalize_angle(-std::numbers::pi), std::numbers::pi);
  EXPECT_EQ(normalize_angle(std::numbers::pi), std::numbers::pi);
  EXPECT_NEAR(normalize_angle(3.0 * std::numbers::pi / 2.0), -std::numbers::pi / 2.0, 1e-15);
}

TEST(DetectionValidation, RejectsDegenerateBoxes)
{
  Detection d;
  EXPECT_NO_THROW(validate_detection(d));
  d.w = 0.0;
  EXPECT_THROW(validate_detection(d), InvalidStateError);
  d.w = 1.0;
  d.px = std::nan("");
  EXPECT_THROW(validate_detection(d), InvalidStateError);
}
