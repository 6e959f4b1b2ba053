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

#include "convtrack/filter.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <utility>

#include "convtrack/errors.hpp"

namespace convtrack {

void GaussianBelief::validate() const
{
  if (cov.rows() != mean.size() || cov.cols() != mean.size()) {
    throw InvalidStateError("belief covariance shape does not match mean");
  }
  if (!mean.allFinite() || !cov.allFinite()) {
    throw InvalidStateError("belief has non-finite entries");
  }
  const double asym = (cov - cov.transpose()).norm();
  if (asym > 1e-10 * std::max(1.0, cov.norm())) {
    throw NumericalError("belief covariance is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("belief covariance is not positive definite");
  }
}

void FilterParams::validate() const
{
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw InputError("sigma scaling a must be positive");
  }
  if (!(gamma > 0.0)) {
    throw InputError("gamma must be positive");
  }
  if (!(tau > 0.0 && tau < 1.0)) {
    throw InputError("tau must lie in (0, 1)");
  }
}

void symmetrize(Eigen::MatrixXd & P) { P = 0.5 * (P + P.transpose()).eval(); }

SigmaSet julier_sigma_points(const GaussianBelief & belief, double a)
{
  if (!(a > 0.0)) {
    throw InputError("sigma scaling a must be positive");
  }
  const Eigen::Index n = belief.dim();
  Eigen::LLT<Eigen::MatrixXd> llt(belief.cov);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("covariance factorization failed while drawing sigma points");
  }
  // Lower factor of n*P is sqrt(n) times the lower factor of P.
  const Eigen::MatrixXd offsets = (a * std::sqrt(static_cast<double>(n))) * llt.matrixL().toDenseMatrix();

  SigmaSet set;
  set.points.resize(n, 2 * n + 1);
  set.points.col(0) = belief.mean;
  for (Eigen::Index i = 0; i < n; ++i) {
    set.points.col(1 + i) = belief.mean + offsets.col(i);
    set.points.col(1 + n + i) = belief.mean - offsets.col(i);
  }
  set.weights.setConstant(2 * n + 1, 1.0 / (2.0 * static_cast<double>(n) * a * a));
  set.weights(0) = 1.0 - 1.0 / (a * a);
  return set;
}

Eigen::VectorXd weighted_mean(
  const Eigen::MatrixXd & points, const Eigen::VectorXd & weights,
  std::optional<Eigen::Index> angle_index)
{
  Eigen::VectorXd mean = points * weights;
  if (angle_index) {
    const Eigen::Index k = *angle_index;
    double s = 0.0;
    double c = 0.0;
    for (Eigen::Index i = 0; i < points.cols(); ++i) {
      s += weights(i) * std::sin(points(k, i));
      c += weights(i) * std::cos(points(k, i));
    }
    mean(k) = std::atan2(s, c);
  }
  return mean;
}

Eigen::MatrixXd deviations(
  const Eigen::MatrixXd & points, const Eigen::VectorXd & mean,
  std::optional<Eigen::Index> angle_index)
{
  Eigen::MatrixXd dev = points.colwise() - mean;
  if (angle_index) {
    const Eigen::Index k = *angle_index;
    for (Eigen::Index i = 0; i < points.cols(); ++i) {
      dev(k, i) = angle_residual(points(k, i), mean(k));
    }
  }
  return dev;
}

GaussianBelief unscented_predict(
  const GaussianBelief & belief, const StateTransition & model, double dt,
  const Eigen::MatrixXd & Q, double a)
{
  const Eigen::Index n = belief.dim();
  if (Q.rows() != n || Q.cols() != n) {
    throw InputError("process noise shape does not match state dimension");
  }
  const SigmaSet sigma = julier_sigma_points(belief, a);

  Eigen::MatrixXd propagated(n, sigma.points.cols());
  for (Eigen::Index i = 0; i < sigma.points.cols(); ++i) {
    propagated.col(i) = model.f(sigma.points.col(i), dt);
  }
  if (!propagated.allFinite()) {
    throw InvalidStateError("unscented_predict: propagated sigma point is not finite");
  }

  GaussianBelief out;
  out.mean = weighted_mean(propagated, sigma.weights, model.angle_index);
  const Eigen::MatrixXd dev = deviations(propagated, out.mean, model.angle_index);
  out.cov = dev * sigma.weights.asDiagonal() * dev.transpose() + Q;
  symmetrize(out.cov);
  return out;
}

double inflation_term(double gamma) { return 1.0 / (2.0 * gamma); }

UpdateReport convolutional_update(
  const GaussianBelief & pred, const Eigen::VectorXd & y, const FilterParams & params,
  const MeasurementModel & model)
{
  params.validate();
  const Eigen::Index m = model.dim;
  if (y.size() != m || params.noise.R.rows() != m || params.noise.R.cols() != m) {
    throw InputError("measurement dimension mismatch");
  }

  const SigmaSet sigma = julier_sigma_points(pred, params.a);
  const Eigen::Index count = sigma.points.cols();

  Eigen::MatrixXd projected(m, count);
  for (Eigen::Index i = 0; i < count; ++i) {
    projected.col(i) = model.h(sigma.points.col(i));
  }

  const Eigen::VectorXd y_hat = weighted_mean(projected, sigma.weights, model.angle_index);
  const Eigen::MatrixXd y_dev = deviations(projected, y_hat, model.angle_index);
  // Sigma points are built as mean +/- offsets, so plain subtraction recovers
  // the offsets exactly.
  const Eigen::MatrixXd x_dev = sigma.points.colwise() - pred.mean;
  const auto W = sigma.weights.asDiagonal();

  UpdateReport report;
  report.S = y_dev * W * y_dev.transpose() + params.noise.R;
  report.S.diagonal().array() += inflation_term(params.gamma);
  symmetrize(report.S);
  const Eigen::MatrixXd Pxy = x_dev * W * y_dev.transpose();

  Eigen::LLT<Eigen::MatrixXd> s_llt(report.S);
  if (s_llt.info() != Eigen::Success) {
    throw NumericalError("innovation covariance is singular");
  }
  report.K = s_llt.solve(Pxy.transpose()).transpose();

  report.innovation = y - y_hat;
  if (model.angle_index) {
    const Eigen::Index k = *model.angle_index;
    report.innovation(k) = angle_residual(y(k), y_hat(k));
  }

  report.posterior.mean = pred.mean + report.K * report.innovation;
  report.posterior.cov = pred.cov - report.K * Pxy.transpose();
  symmetrize(report.posterior.cov);
  if (!report.posterior.mean.allFinite() || !report.posterior.cov.allFinite()) {
    throw NumericalError("update produced a non-finite posterior");
  }

  report.gamma_next = params.adaptive ? adapt_gamma(params.gamma, report.innovation, params.tau, m)
                                      : params.gamma;
  return report;
}

double adapt_gamma_scalar(double gamma, double sq_norm, double tau, Eigen::Index m)
{
  const double per_dim = sq_norm / static_cast<double>(m);
  const double z = -2.0 * gamma * (std::exp(-gamma) - per_dim);
  // exp overflow sends the logistic factor to its 0 asymptote.
  const double logistic = z > 700.0 ? 0.0 : 1.0 / (1.0 + std::exp(z));
  const double next = (1.0 - tau) * gamma + tau * gamma * logistic;
  return std::clamp(next, kGammaMin, kGammaMax);
}

double adapt_gamma(double gamma, const Eigen::VectorXd & innovation, double tau, Eigen::Index m)
{
  return adapt_gamma_scalar(gamma, innovation.squaredNorm(), tau, m);
}

StateTransition tracking_transition(MotionModelKind kind)
{
  StateTransition t;
  t.f = [kind](const Eigen::VectorXd & x, double dt) -> Eigen::VectorXd {
    return motion_predict(kind, StateVector(x), dt);
  };
  t.angle_index = idx::kYaw;
  return t;
}

MeasurementModel box_measurement()
{
  MeasurementModel m;
  m.h = [](const Eigen::VectorXd & x) -> Eigen::VectorXd { return x.head(kMeasDim); };
  m.dim = kMeasDim;
  m.angle_index = idx::kYaw;
  return m;
}

ConvUkf::ConvUkf(
  GaussianBelief initial, FilterParams params, StateTransition transition,
  MeasurementModel measurement)
: belief_(std::move(initial)),
  params_(std::move(params)),
  transition_(std::move(transition)),
  measurement_(std::move(measurement)),
  gamma_(params_.gamma)
{
  params_.validate();
  belief_.validate();
}

void ConvUkf::predict(double dt)
{
  belief_ = unscented_predict(belief_, transition_, dt, params_.noise.Q, params_.a);
}

UpdateReport ConvUkf::update(const Eigen::VectorXd & y)
{
  FilterParams step = params_;
  step.gamma = gamma_;
  UpdateReport report = convolutional_update(belief_, y, step, measurement_);
  if (transition_.angle_index) {
    auto & yaw = report.posterior.mean(*transition_.angle_index);
    yaw = normalize_angle(yaw);
  }
  belief_ = report.posterior;
  gamma_ = report.gamma_next;
  return report;
}

}  // namespace convtrack
