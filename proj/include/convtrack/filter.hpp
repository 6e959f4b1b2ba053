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
#include <functional>
#include <limits>
#include <optional>

#include "convtrack/state_models.hpp"

namespace convtrack {

/// Mean and symmetric positive-definite covariance of a Gaussian posterior.
struct GaussianBelief
{
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  Eigen::Index dim() const { return mean.size(); }

  /// Throws InvalidStateError on shape mismatch or non-finite entries and
  /// NumericalError when the covariance is not positive definite.
  void validate() const;
};

/// 2n+1 Julier sigma points stored column-wise, with their weights.
struct SigmaSet
{
  Eigen::MatrixXd points;
  Eigen::VectorXd weights;
};

/// State transition applied to every sigma point. `angle_index`, when set,
/// names a component that lives on the circle and is averaged accordingly.
struct StateTransition
{
  std::function<Eigen::VectorXd(const Eigen::VectorXd &, double)> f;
  std::optional<Eigen::Index> angle_index;
};

struct MeasurementModel
{
  std::function<Eigen::VectorXd(const Eigen::VectorXd &)> h;
  Eigen::Index dim = 0;
  std::optional<Eigen::Index> angle_index;
};

inline constexpr double kGammaMin = 1e-4;
inline constexpr double kGammaMax = 1e4;
inline constexpr double kDefaultTau = 0.05;

/// Filter tuning. A gamma of +infinity removes the convolutional inflation
/// and turns the update into the plain UKF update.
struct FilterParams
{
  double a = 1.0;
  double gamma = std::numeric_limits<double>::infinity();
  double tau = kDefaultTau;
  bool adaptive = false;
  NoiseSpec noise;

  void validate() const;
};

struct UpdateReport
{
  GaussianBelief posterior;
  Eigen::VectorXd innovation;
  Eigen::MatrixXd S;  // innovation covariance, inflation included
  Eigen::MatrixXd K;
  double gamma_next = 0.0;
};

SigmaSet julier_sigma_points(const GaussianBelief & belief, double a);

/// Weighted mean of column vectors; the angle component, if any, is the
/// circular mean atan2(sum w sin, sum w cos).
Eigen::VectorXd weighted_mean(
  const Eigen::MatrixXd & points, const Eigen::VectorXd & weights,
  std::optional<Eigen::Index> angle_index);

/// Columns minus `mean`, with the angle component wrapped to (-pi, pi].
Eigen::MatrixXd deviations(
  const Eigen::MatrixXd & points, const Eigen::VectorXd & mean,
  std::optional<Eigen::Index> angle_index);

GaussianBelief unscented_predict(
  const GaussianBelief & belief, const StateTransition & model, double dt,
  const Eigen::MatrixXd & Q, double a);

/// The 1/(2 gamma) isotropic inflation added to the innovation covariance.
double inflation_term(double gamma);

UpdateReport convolutional_update(
  const GaussianBelief & pred, const Eigen::VectorXd & y, const FilterParams & params,
  const MeasurementModel & model);

/// One step of the logistic gamma adaptation driven by the squared norm of
/// the innovation. The result is clamped to [kGammaMin, kGammaMax].
double adapt_gamma(double gamma, const Eigen::VectorXd & innovation, double tau, Eigen::Index m);

/// Scalar form of the rule with s = ||innovation||^2 already computed.
double adapt_gamma_scalar(double gamma, double sq_norm, double tau, Eigen::Index m);

/// P <- (P + P^T) / 2
void symmetrize(Eigen::MatrixXd & P);

StateTransition tracking_transition(MotionModelKind kind);
MeasurementModel box_measurement();

/// Single-owner filter instance: belief plus the running gamma.
class ConvUkf
{
public:
  ConvUkf(GaussianBelief initial, FilterParams params, StateTransition transition,
    MeasurementModel measurement);

  void predict(double dt);
  UpdateReport update(const Eigen::VectorXd & y);

  const GaussianBelief & belief() const { return belief_; }
  double gamma() const { return gamma_; }
  const FilterParams & params() const { return params_; }

private:
  GaussianBelief belief_;
  FilterParams params_;
  StateTransition transition_;
  MeasurementModel measurement_;
  double gamma_;
};

}  // namespace convtrack
