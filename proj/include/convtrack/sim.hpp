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
#include <cstdint>
#include <vector>

#include "convtrack/filter.hpp"
#include "convtrack/rng.hpp"
#include "convtrack/state_models.hpp"
#include "convtrack/tracker.hpp"

namespace convtrack {

struct Range
{
  double lo = 0.0;
  double hi = 0.0;
};

struct ScenarioConfig
{
  int objects = 6;
  int frames = 100;
  double dt = 0.1;
  double scene_half_extent = 40.0;  // objects start and FPs appear in [-e, e]^2
  Range speed{2.0, 10.0};
  Range accel{-0.5, 0.5};
  Range yaw_rate{-0.2, 0.2};
  Range length{3.5, 4.8};
  Range width{1.6, 2.0};
  Range height{1.4, 1.8};
  Range det_score{0.5, 1.0};
  Range fp_score{0.05, 0.6};
  Eigen::MatrixXd Q_true;  // 11x11 process noise, PSD
  Eigen::MatrixXd R_true;  // 7x7 detection noise, PD
  double rho_c = 0.0;      // miss probability
  double bias_prob = 0.0;
  double bias_scale = 5.0;  // position bias std in units of the nominal position std
  double bias_yaw = 0.7853981633974483;  // yaw bias ~ U(-bias_yaw, bias_yaw)
  double fp_rate = 0.0;     // Poisson mean of spurious boxes per frame
  std::uint64_t seed = 0;

  /// Noise levels matching TrackerConfig::default_noise().
  static ScenarioConfig defaults();
  /// Standard deviation of the detection position noise (largest axis).
  double position_sigma() const;
  void validate() const;
};

struct TruthObject
{
  int id = 0;
  StateVector state;
};

/// truth[f][i] and clean[f][i] describe the same object.
struct Scenario
{
  std::vector<std::vector<TruthObject>> truth;
  std::vector<std::vector<Detection>> clean;
};

Scenario generate_scenario(const ScenarioConfig & config);

struct Provenance
{
  int source = -1;  // index into the clean frame, -1 for a false positive
  bool biased = false;
};

struct ContaminatedFrames
{
  std::vector<std::vector<Detection>> frames;
  std::vector<std::vector<Provenance>> provenance;
};

/// Applies misses, bias and false positives. Every detection draws the same
/// amount of randomness from its own stream whatever the outcome.
ContaminatedFrames contaminate(
  const std::vector<std::vector<Detection>> & clean, const ScenarioConfig & config);

/// Single-object Monte Carlo setup: the scenario supplies truth dynamics and
/// contamination, `filter_noise` is what the filters assume.
struct MonteCarloConfig
{
  ScenarioConfig scenario;
  std::vector<Method> variants{Method::kUkf, Method::kConvFixed, Method::kConvAdaptive};
  NoiseSpec filter_noise;
  double gamma = kDefaultGamma;
  double tau = kDefaultTau;
  double a = 1.0;
  int runs = 20;
  int steps = 200;
  double initial_error = 1.0;  // magnitude of the initial position offset
  Eigen::MatrixXd initial_cov;
};

struct VariantStats
{
  Method method = Method::kUkf;
  std::vector<double> mean_sq_error;      // E||x~_t||^2 per step, over surviving runs
  std::vector<double> running_max;        // running maximum of mean_sq_error
  std::vector<double> position_rmse_step;  // per-step position RMSE
  double position_rmse = 0.0;              // over all steps and runs
  double mean_sq_error_all = 0.0;
  int divergences = 0;
  std::vector<double> run_position_rmse;  // one entry per run, NaN when diverged
};

struct MonteCarloResult
{
  std::vector<VariantStats> variants;
  const VariantStats & of(Method method) const;
};

MonteCarloResult run_monte_carlo(const MonteCarloConfig & config);

struct LineFit
{
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LineFit fit_line(const std::vector<double> & x, const std::vector<double> & y);

struct BoundednessConfig
{
  MonteCarloConfig base;
  std::vector<double> noise_scales{1.0, 2.0, 3.0};  // multiply the detection std
  std::vector<double> initial_errors{0.5, 2.0, 5.0};
};

struct BoundednessPoint
{
  double noise_scale = 0.0;
  double initial_error = 0.0;
  double noise_bound = 0.0;  // r_u + delta r_u
  double max_mean_sq_error = 0.0;
  double late_growth_ratio = 0.0;  // max running mean after step 1000 / running mean at 100
  bool finite = true;
  int divergences = 0;
};

struct BoundednessReport
{
  std::vector<BoundednessPoint> points;
  LineFit vs_noise;          // at the smallest initial error
  LineFit vs_initial_error;  // at the smallest noise scale
  bool all_finite = true;
  double worst_late_growth = 0.0;
};

/// Grid of single-object runs with the first variant of `base`.
BoundednessReport boundedness_study(const BoundednessConfig & config);

/// The default 10^4-step study with 10% misses and 10% biased detections.
BoundednessConfig default_boundedness_config();

}  // namespace convtrack
