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

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "convtrack/errors.hpp"
#include "convtrack/filter.hpp"
#include "convtrack/oracles.hpp"
#include "convtrack/rng.hpp"
#include "convtrack/tracker.hpp"

using namespace convtrack;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd normals(CounterRng & rng, Eigen::Index n)
{
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    z(i) = normal(rng);
  }
  return z;
}

Eigen::MatrixXd random_spd(CounterRng & rng, Eigen::Index n)
{
  Eigen::MatrixXd A(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    A.col(c) = normals(rng, n);
  }
  return A * A.transpose() / static_cast<double>(n) + 0.1 * Eigen::MatrixXd::Identity(n, n);
}

MeasurementModel scalar_identity()
{
  return {[](const Eigen::VectorXd & x) -> Eigen::VectorXd { return x; }, 1, std::nullopt};
}

FilterParams scalar_params(double gamma)
{
  FilterParams p;
  p.gamma = gamma;
  p.noise.Q = Eigen::MatrixXd::Zero(1, 1);
  p.noise.R = Eigen::MatrixXd::Ones(1, 1);
  return p;
}

GaussianBelief tracking_belief(CounterRng & rng)
{
  GaussianBelief b;
  b.mean = Eigen::VectorXd::Zero(kStateDim);
  b.mean << 5.0, -3.0, 0.8, 0.4, 4.0, 1.8, 1.5, 6.0, 0.0, 0.3, 0.2;
  b.mean += 0.1 * normals(rng, kStateDim);
  b.cov = 0.05 * random_spd(rng, kStateDim);
  return b;
}

double min_eigenvalue(const Eigen::MatrixXd & M)
{
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M).eigenvalues().minCoeff();
}

}  // namespace

TEST(SigmaPoints, ScalarExample)
{
  const GaussianBelief b{Eigen::VectorXd::Zero(1), 4.0 * Eigen::MatrixXd::Identity(1, 1)};
  const SigmaSet s = julier_sigma_points(b, 1.0);
  ASSERT_EQ(s.points.cols(), 3);
  EXPECT_DOUBLE_EQ(s.points(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(s.points(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(s.points(0, 2), -2.0);
  EXPECT_DOUBLE_EQ(s.weights(0), 0.0);
  EXPECT_DOUBLE_EQ(s.weights(1), 0.5);
  EXPECT_DOUBLE_EQ(s.weights(2), 0.5);
}

TEST(SigmaPoints, ReconstructMeanAndCovariance)
{
  for (int k = 0; k < 100; ++k) {
    CounterRng rng(100 + k, Stream::kTest);
    const GaussianBelief b{normals(rng, kStateDim), random_spd(rng, kStateDim)};
    const double a = 0.5 + 1.5 * rng.uniform();
    const SigmaSet s = julier_sigma_points(b, a);
    EXPECT_NEAR(s.weights.sum(), 1.0, 1e-12);
    EXPECT_EQ(s.points.col(0), b.mean);
    const Eigen::VectorXd mean = s.points * s.weights;
    const Eigen::MatrixXd dev = s.points.colwise() - b.mean;
    const Eigen::MatrixXd cov = dev * s.weights.asDiagonal() * dev.transpose();
    ASSERT_LT((mean - b.mean).cwiseAbs().maxCoeff(), 1e-10);
    ASSERT_LT((cov - b.cov).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(SigmaPoints, RejectsIndefiniteCovariance)
{
  GaussianBelief b{Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2)};
  b.cov(1, 1) = -1.0;
  EXPECT_THROW(julier_sigma_points(b, 1.0), NumericalError);
  EXPECT_THROW(julier_sigma_points({Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2)}, 0.0), InputError);
}

TEST(UnscentedPredict, IdentityModelIsExact)
{
  CounterRng rng(1, Stream::kTest);
  const GaussianBelief b{normals(rng, 5), random_spd(rng, 5)};
  const StateTransition id{[](const Eigen::VectorXd & x, double) { return x; }, std::nullopt};
  const GaussianBelief out = unscented_predict(b, id, 0.1, Eigen::MatrixXd::Zero(5, 5), 1.0);
  EXPECT_LT((out.mean - b.mean).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((out.cov - b.cov).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(UnscentedPredict, LinearModelIsExact)
{
  for (int k = 0; k < 20; ++k) {
    CounterRng rng(200 + k, Stream::kTest);
    const GaussianBelief b{normals(rng, 6), random_spd(rng, 6)};
    Eigen::MatrixXd F(6, 6);
    for (int c = 0; c < 6; ++c) {
      F.col(c) = normals(rng, 6);
    }
    const Eigen::MatrixXd Q = 0.1 * random_spd(rng, 6);
    const StateTransition lin{[F](const Eigen::VectorXd & x, double) -> Eigen::VectorXd { return F * x; },
      std::nullopt};
    const GaussianBelief out = unscented_predict(b, lin, 0.1, Q, 1.0);
    EXPECT_LT((out.mean - F * b.mean).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((out.cov - (F * b.cov * F.transpose() + Q)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(UnscentedPredict, CtraMeanAgreesWithMonteCarlo)
{
  CounterRng rng(3, Stream::kTest);
  GaussianBelief b;
  b.mean = Eigen::VectorXd::Zero(kStateDim);
  b.mean << 0.0, 0.0, 1.0, 0.5, 4.0, 2.0, 1.5, 8.0, 0.0, 1.0, 0.6;
  b.cov = 1e-3 * Eigen::MatrixXd::Identity(kStateDim, kStateDim);
  const GaussianBelief ut =
    unscented_predict(b, tracking_transition(MotionModelKind::kCTRA), 0.1, Eigen::MatrixXd::Zero(11, 11), 1.0);

  const Eigen::MatrixXd L = Eigen::LLT<Eigen::MatrixXd>(b.cov).matrixL();
  const int samples = 1000000;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(kStateDim);
  Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(kStateDim);
  for (int i = 0; i < samples; ++i) {
    const StateVector x = ctra_predict(StateVector(b.mean + L * normals(rng, kStateDim)), 0.1);
    sum += x;
    sum_sq += x.cwiseProduct(x);
  }
  const Eigen::VectorXd mc_mean = sum / samples;
  const Eigen::VectorXd se = ((sum_sq / samples - mc_mean.cwiseProduct(mc_mean)) / samples).cwiseSqrt();
  for (int i : {idx::kPx, idx::kPy, idx::kPz, idx::kYaw, idx::kSpeed}) {
    EXPECT_LT(std::abs(ut.mean(i) - mc_mean(i)), 3.0 * se(i)) << "component " << i;
  }
}

TEST(UnscentedPredict, CircularYawMean)
{
  // two halves of the mass on either side of +-pi average to pi, not 0
  GaussianBelief b;
  b.mean = Eigen::VectorXd::Zero(kStateDim);
  b.mean(idx::kYaw) = std::numbers::pi - 0.01;
  b.mean(idx::kLength) = b.mean(idx::kWidth) = b.mean(idx::kHeight) = 1.0;
  b.cov = 1e-4 * Eigen::MatrixXd::Identity(kStateDim, kStateDim);
  b.cov(idx::kYawRate, idx::kYawRate) = 1.0;
  const GaussianBelief out =
    unscented_predict(b, tracking_transition(MotionModelKind::kCTRA), 0.1, Eigen::MatrixXd::Zero(11, 11), 1.0);
  EXPECT_GT(std::abs(out.mean(idx::kYaw)), 3.0);
  EXPECT_LT(out.cov(idx::kYaw, idx::kYaw), 0.1);
}

TEST(ConvolutionalUpdate, ScalarReduction)
{
  const GaussianBelief prior{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Ones(1, 1)};
  const UpdateReport r =
    convolutional_update(prior, Eigen::VectorXd::Constant(1, 2.0), scalar_params(0.5), scalar_identity());
  EXPECT_NEAR(r.S(0, 0), 3.0, 1e-12);
  EXPECT_NEAR(r.K(0, 0), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.posterior.mean(0), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.posterior.cov(0, 0), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.innovation(0), 2.0, 1e-12);
  EXPECT_EQ(r.gamma_next, 0.5);
}

TEST(ConvolutionalUpdate, InfiniteGammaIsTheUkfUpdate)
{
  for (int k = 0; k < 100; ++k) {
    CounterRng rng(300 + k, Stream::kTest);
    const GaussianBelief pred = tracking_belief(rng);
    FilterParams p;
    p.gamma = kInf;
    p.noise = TrackerConfig::default_noise();
    const Eigen::VectorXd y = pred.mean.head(kMeasDim) + 0.2 * normals(rng, kMeasDim);
    const UpdateReport r = convolutional_update(pred, y, p, box_measurement());
    // explicit-sum reference; an identity transition with Q = 0 leaves the prior unchanged
    const oracle::Gaussian ref = oracle::reference_ukf_step(
      {pred.mean, pred.cov}, [](const Eigen::VectorXd & x) { return x; },
      Eigen::MatrixXd::Zero(kStateDim, kStateDim),
      [](const Eigen::VectorXd & x) -> Eigen::VectorXd { return x.head(kMeasDim); }, p.noise.R, y, 1.0);
    ASSERT_LT((r.posterior.mean - ref.mean).cwiseAbs().maxCoeff(), 1e-9);
    ASSERT_LT((r.posterior.cov - ref.cov).cwiseAbs().maxCoeff(), 1e-9);
    FilterParams huge = p;
    huge.gamma = 1e300;
    const UpdateReport h = convolutional_update(pred, y, huge, box_measurement());
    ASSERT_LT((r.posterior.mean - h.posterior.mean).cwiseAbs().maxCoeff(), 1e-10);
    ASSERT_LT((r.posterior.cov - h.posterior.cov).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(ConvolutionalUpdate, ZeroInnovationKeepsMean)
{
  CounterRng rng(4, Stream::kTest);
  const GaussianBelief pred = tracking_belief(rng);
  FilterParams p;
  p.gamma = 2.0;
  p.noise = TrackerConfig::default_noise();
  // linear projection: the predicted measurement is the head of the mean
  const UpdateReport r = convolutional_update(pred, pred.mean.head(kMeasDim), p, box_measurement());
  EXPECT_LT((r.posterior.mean - pred.mean).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_GT(min_eigenvalue(pred.cov - r.posterior.cov), -1e-10);
}

TEST(ConvolutionalUpdate, PosteriorIsSymmetricPositiveDefiniteAndShrinks)
{
  for (int k = 0; k < 200; ++k) {
    CounterRng rng(400 + k, Stream::kTest);
    const GaussianBelief pred = tracking_belief(rng);
    FilterParams p;
    p.gamma = std::pow(10.0, -2.0 + 5.0 * rng.uniform());
    p.noise = TrackerConfig::default_noise();
    const Eigen::VectorXd y = pred.mean.head(kMeasDim) + normals(rng, kMeasDim);
    const UpdateReport r = convolutional_update(pred, y, p, box_measurement());
    const Eigen::MatrixXd & P = r.posterior.cov;
    ASSERT_LT((P - P.transpose()).cwiseAbs().maxCoeff(), 1e-10);
    ASSERT_GT(min_eigenvalue(P), 0.0);
    ASSERT_GT(min_eigenvalue(pred.cov - P), -1e-10);
    ASSERT_GT(min_eigenvalue(r.S), 0.0);
  }
}

TEST(ConvolutionalUpdate, SmallerGammaDownWeightsMeasurements)
{
  CounterRng rng(5, Stream::kTest);
  const GaussianBelief pred = tracking_belief(rng);
  const Eigen::VectorXd y = pred.mean.head(kMeasDim) + normals(rng, kMeasDim);
  FilterParams p;
  p.noise = TrackerConfig::default_noise();
  double prev_gain = 0.0;
  Eigen::MatrixXd prev_S;
  for (double g : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    p.gamma = g;
    const UpdateReport r = convolutional_update(pred, y, p, box_measurement());
    if (prev_S.size() > 0) {
      EXPECT_GT(min_eigenvalue(prev_S - r.S), -1e-12);
    }
    prev_S = r.S;
    const GaussianBelief scalar{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Ones(1, 1)};
    const double gain =
      convolutional_update(scalar, Eigen::VectorXd::Ones(1), scalar_params(g), scalar_identity()).K.norm();
    EXPECT_GE(gain, prev_gain);
    prev_gain = gain;
  }
}

TEST(ConvolutionalUpdate, YawInnovationWraps)
{
  GaussianBelief pred;
  pred.mean = Eigen::VectorXd::Zero(kStateDim);
  pred.mean << 0, 0, 0, std::numbers::pi - 0.05, 4, 2, 1.5, 0, 0, 0, 0;
  pred.cov = 0.01 * Eigen::MatrixXd::Identity(kStateDim, kStateDim);
  FilterParams p;
  p.noise = TrackerConfig::default_noise();
  Eigen::VectorXd y = pred.mean.head(kMeasDim);
  y(idx::kYaw) = -std::numbers::pi + 0.05;
  const UpdateReport r = convolutional_update(pred, y, p, box_measurement());
  EXPECT_NEAR(r.innovation(idx::kYaw), 0.1, 1e-9);
  EXPECT_GT(std::abs(normalize_angle(r.posterior.mean(idx::kYaw))), 3.0);
}

TEST(ConvolutionalUpdate, AdaptiveReportsNextGamma)
{
  const GaussianBelief prior{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Ones(1, 1)};
  FilterParams p = scalar_params(1.0);
  p.adaptive = true;
  const UpdateReport r = convolutional_update(prior, Eigen::VectorXd::Constant(1, 0.5), p, scalar_identity());
  EXPECT_DOUBLE_EQ(r.gamma_next, adapt_gamma_scalar(1.0, 0.25, p.tau, 1));
  EXPECT_LT(r.gamma_next, 1.0);
}

TEST(AdaptGamma, DirectEvaluations)
{
  EXPECT_NEAR(adapt_gamma_scalar(1.0, std::exp(-1.0), 0.05, 1), 0.975, 1e-12);
  EXPECT_NEAR(adapt_gamma_scalar(1.0, 0.0, 0.05, 1), 0.98380338726366467, 1e-12);
  Eigen::VectorXd innov = Eigen::VectorXd::Zero(7);
  innov(0) = std::sqrt(7.0 * std::exp(-1.0));
  EXPECT_NEAR(adapt_gamma(1.0, innov, 0.05, 7), 0.975, 1e-12);
}

TEST(AdaptGamma, MonotoneInInnovationAndClamped)
{
  for (double g : {1e-4, 0.01, 1.0, 30.0, 1e4}) {
    double prev = kInf;
    for (int k = 0; k <= 500; ++k) {
      const double next = adapt_gamma_scalar(g, 0.01 * k * k, 0.05, 7);
      ASSERT_LE(next, prev);
      ASSERT_GE(next, kGammaMin);
      ASSERT_LE(next, kGammaMax);
      prev = next;
    }
  }
  EXPECT_EQ(adapt_gamma_scalar(1e-4, 1e6, 0.5, 1), kGammaMin);
  EXPECT_TRUE(std::isfinite(adapt_gamma_scalar(5000.0, 1e300, 0.05, 1)));
}

TEST(ConvUkfInstance, TracksAConstantTurn)
{
  StateVector truth;
  truth << 0, 0, 0.75, 0.2, 4, 1.8, 1.5, 6.0, 0.0, 0.0, 0.1;
  GaussianBelief init{truth, TrackerConfig::default_birth_cov()};
  init.mean(idx::kSpeed) = 0.0;
  init.mean(idx::kYawRate) = 0.0;
  ConvUkf f(init, method_params(Method::kConvFixed, 10.0, kDefaultTau, 1.0, TrackerConfig::default_noise()),
    tracking_transition(MotionModelKind::kCTRA), box_measurement());
  for (int t = 0; t < 100; ++t) {
    truth = ctra_predict(truth, 0.1);
    f.predict(0.1);
    f.update(truth.head(kMeasDim));
  }
  EXPECT_LT((f.belief().mean.head(3) - truth.head(3)).norm(), 0.05);
  EXPECT_NEAR(f.belief().mean(idx::kSpeed), 6.0, 0.1);
  EXPECT_EQ(f.gamma(), 10.0);
}

TEST(FilterParamsValidation, RejectsOutOfRange)
{
  FilterParams p;
  EXPECT_NO_THROW(p.validate());
  p.tau = 1.0;
  EXPECT_THROW(p.validate(), InputError);
  p.tau = 0.05;
  p.gamma = 0.0;
  EXPECT_THROW(p.validate(), InputError);
  p.gamma = 1.0;
  p.a = -1.0;
  EXPECT_THROW(p.validate(), InputError);
}
