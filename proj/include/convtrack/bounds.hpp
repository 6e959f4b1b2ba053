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

namespace convtrack {

/// Bounds on the system, noise and covariance terms of a stable filter run.
/// `dp_*` are the rectification terms, which may be zero.
struct BoundAssumptions
{
  double f_u = 1.0;
  double h_u = 1.0;
  double alpha_u = 1.0;
  double beta_u = 1.0;
  double q_l = 1.0;
  double q_u = 1.0;
  double r_u = 1.0;
  double dr_u = 0.0;
  double p_l = 1.0;
  double p_u = 1.0;
  double dp_l = 0.0;
  double dp_u = 0.0;
  double dp_yy_u = 0.0;
  int n = 1;
  int m = 1;

  /// Throws InputError when a bound is out of range or inconsistent.
  void validate() const;
};

struct BoundConstants
{
  double p_hat_u = 0.0;
  double K_u = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double nu_l = 0.0;
  double nu_u = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double C3 = 0.0;
};

/// Constants of the mean-square error bound
///   E||x~_t||^2 <= C1 E||x~_0||^2 + C2 (r_u + dr_u) + C3.
BoundConstants bound_constants(const BoundAssumptions & a);

}  // namespace convtrack
