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

#include "convtrack/bounds.hpp"

#include <cmath>
#include <string>

#include "convtrack/errors.hpp"

namespace convtrack {

namespace {

void require(bool ok, const std::string & what)
{
  if (!ok) {
    throw InputError("inconsistent bound assumptions: " + what);
  }
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }
bool non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

void BoundAssumptions::validate() const
{
  require(positive(f_u) && positive(h_u) && positive(alpha_u) && positive(beta_u), "dynamics bounds must be positive");
  require(positive(q_l) && positive(q_u) && positive(r_u), "noise bounds must be positive");
  require(positive(p_l) && positive(p_u), "covariance bounds must be positive");
  require(non_negative(dr_u) && non_negative(dp_l) && non_negative(dp_u) && non_negative(dp_yy_u),
    "rectification terms must be non-negative");
  require(q_l <= q_u, "q_l > q_u");
  require(p_l <= p_u, "p_l > p_u");
  require(dp_l <= dp_u, "dp_l > dp_u");
  require(n >= 1 && m >= 1, "dimensions must be positive");
}

BoundConstants bound_constants(const BoundAssumptions & a)
{
  a.validate();
  BoundConstants c;
  const double af = a.alpha_u * a.f_u;
  c.p_hat_u = a.p_u * af * af + a.q_u + a.dp_u;
  require(c.p_hat_u >= a.p_l, "predicted covariance bound below p_l");
  c.K_u = std::sqrt(static_cast<double>(a.n)) * c.p_hat_u;

  const double fkbh = a.f_u * c.K_u * a.beta_u * a.h_u;
  const double denom = af + af * c.K_u * a.beta_u * a.h_u;
  c.lambda = 1.0 - 1.0 / (1.0 + (a.q_l + a.dp_l) / (c.p_hat_u * denom * denom));
  require(std::isfinite(c.lambda) && c.lambda >= 0.0 && c.lambda <= 1.0, "lambda outside [0, 1]");

  c.nu_l = 1.0 / c.p_hat_u;
  c.nu_u = 1.0 / a.p_l;
  const double ka = c.K_u * af;
  c.mu = ka * ka * (a.r_u + a.dr_u) * a.m / a.p_l + a.q_u * a.n / a.p_l;

  const double contraction = c.nu_l * a.p_l * (1.0 - c.lambda);
  c.C1 = (c.nu_u / c.nu_l) * (1.0 - c.lambda) * (1.0 + fkbh);
  c.C2 = 1.0 + (1.0 + fkbh) * a.m * ka * ka / contraction;
  c.C3 = (1.0 + fkbh) * a.n * a.q_u / contraction + a.dp_yy_u;
  return c;
}

}  // namespace convtrack
