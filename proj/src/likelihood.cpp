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

#include "convtrack/likelihood.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "convtrack/errors.hpp"
#include "convtrack/filter.hpp"

namespace convtrack {

namespace {

struct Axis
{
  std::vector<double> nodes;
  std::vector<double> weights;  // trapezoid
};

Axis trapezoid_axis(double lo, double hi, int points)
{
  Axis axis;
  if (!(hi > lo) || points < 2) {
    return axis;
  }
  const double step = (hi - lo) / static_cast<double>(points - 1);
  axis.nodes.resize(points);
  axis.weights.assign(points, step);
  for (int i = 0; i < points; ++i) {
    axis.nodes[i] = lo + step * i;
  }
  axis.weights.front() *= 0.5;
  axis.weights.back() *= 0.5;
  return axis;
}

// Density evaluator with the factorization done once.
class Normal
{
public:
  Normal(const Eigen::VectorXd & mean, const Eigen::MatrixXd & cov) : mean_(mean), llt_(cov)
  {
    if (llt_.info() != Eigen::Success) {
      throw NumericalError("covariance is not positive definite");
    }
    const double log_det = 2.0 * llt_.matrixL().toDenseMatrix().diagonal().array().log().sum();
    log_norm_ = -0.5 * (log_det + static_cast<double>(mean.size()) * std::log(2.0 * std::numbers::pi));
  }

  double operator()(const Eigen::VectorXd & y) const
  {
    const Eigen::VectorXd z = llt_.matrixL().solve(y - mean_);
    return std::exp(log_norm_ - 0.5 * z.squaredNorm());
  }

private:
  Eigen::VectorXd mean_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double log_norm_ = 0.0;
};

double integrate(const Axis & axis, auto && fn)
{
  double sum = 0.0;
  for (std::size_t i = 0; i < axis.nodes.size(); ++i) {
    sum += axis.weights[i] * fn(axis.nodes[i]);
  }
  return sum;
}

}  // namespace

double exp_kernel(double sq_distance, double gamma)
{
  return sq_distance <= 0.0 ? 1.0 : std::exp(-gamma * sq_distance);
}

double gaussian_density(const Eigen::VectorXd & y, const Eigen::VectorXd & mean, const Eigen::MatrixXd & cov)
{
  return Normal(mean, cov)(y);
}

double conv_likelihood_closed(
  const Eigen::VectorXd & y, const Eigen::VectorXd & mean, const Eigen::MatrixXd & R, double gamma)
{
  Eigen::MatrixXd cov = R;
  cov.diagonal().array() += inflation_term(gamma);
  return gaussian_density(y, mean, cov);
}

double conv_likelihood_numeric(
  const Eigen::VectorXd & y, const Eigen::VectorXd & mean, const Eigen::MatrixXd & R, double gamma,
  const QuadratureSpec & grid)
{
  const Eigen::Index d = y.size();
  if (d < 1 || d > 2) {
    throw InputError("conv_likelihood_numeric supports dimensions 1 and 2 only");
  }
  if (mean.size() != d || R.rows() != d || R.cols() != d) {
    throw InputError("conv_likelihood_numeric: dimension mismatch");
  }
  if (!(gamma > 0.0)) {
    throw InputError("gamma must be positive");
  }

  const double w = grid.half_width_sigmas;
  const double kernel_sd = 1.0 / std::sqrt(2.0 * gamma);

  // Outside mean +/- w sd the nominal density is negligible, outside
  // y +/- w kernel_sd the kernel is; integrate over the intersection.
  std::vector<Axis> axes;
  std::vector<Axis> gauss_axes;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double sd = std::sqrt(R(i, i));
    const double lo = std::max(mean(i) - w * sd, y(i) - w * kernel_sd);
    const double hi = std::min(mean(i) + w * sd, y(i) + w * kernel_sd);
    axes.push_back(trapezoid_axis(lo, hi, grid.points_per_dim));
    gauss_axes.push_back(trapezoid_axis(mean(i) - w * sd, mean(i) + w * sd, grid.points_per_dim));
  }

  const Axis kernel_axis = trapezoid_axis(-w * kernel_sd, w * kernel_sd, grid.points_per_dim);
  const double kernel_mass_1d = integrate(kernel_axis, [&](double t) { return exp_kernel(t * t, gamma); });
  const double kernel_mass = std::pow(kernel_mass_1d, static_cast<double>(d));

  const Normal nominal(mean, R);
  Eigen::VectorXd ybar(d);
  double unnormalized = 0.0;
  double gauss_mass = 0.0;
  if (d == 1) {
    unnormalized = integrate(axes[0], [&](double t) {
      ybar(0) = t;
      return exp_kernel((y - ybar).squaredNorm(), gamma) * nominal(ybar);
    });
    gauss_mass = integrate(gauss_axes[0], [&](double t) {
      ybar(0) = t;
      return nominal(ybar);
    });
  } else {
    unnormalized = integrate(axes[0], [&](double t0) {
      return integrate(axes[1], [&](double t1) {
        ybar << t0, t1;
        return exp_kernel((y - ybar).squaredNorm(), gamma) * nominal(ybar);
      });
    });
    gauss_mass = integrate(gauss_axes[0], [&](double t0) {
      return integrate(gauss_axes[1], [&](double t1) {
        ybar << t0, t1;
        return nominal(ybar);
      });
    });
  }
  // Fubini: the y-integral of the kernel is the same for every ybar.
  return unnormalized / (kernel_mass * gauss_mass);
}

}  // namespace convtrack
