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

/// Survival function of the Exp(gamma) gap variable evaluated at a squared
/// distance: 1 - F(d) = exp(-gamma d) for d >= 0, and 1 for d < 0.
double exp_kernel(double sq_distance, double gamma);

/// Multivariate normal density N(y; mean, cov). Throws NumericalError when
/// cov is not positive definite.
double gaussian_density(const Eigen::VectorXd & y, const Eigen::VectorXd & mean, const Eigen::MatrixXd & cov);

/// Convolutional likelihood in closed form: N(y; mean, R + I/(2 gamma)).
double conv_likelihood_closed(
  const Eigen::VectorXd & y, const Eigen::VectorXd & mean, const Eigen::MatrixXd & R, double gamma);

struct QuadratureSpec
{
  int points_per_dim = 401;
  double half_width_sigmas = 8.0;
};

/// Convolutional likelihood by direct quadrature of
///   integral (1 - F(||y - ybar||^2)) N(ybar; mean, R) dybar,
/// normalized over y. Dimension must be 1 or 2; larger inputs throw InputError.
double conv_likelihood_numeric(
  const Eigen::VectorXd & y, const Eigen::VectorXd & mean, const Eigen::MatrixXd & R, double gamma,
  const QuadratureSpec & grid = {});

}  // namespace convtrack
