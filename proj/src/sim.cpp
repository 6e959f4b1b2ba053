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

#include "convtrack/sim.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "convtrack/errors.hpp"

namespace convtrack {

namespace {

constexpr double kMinExtent = 0.05;

std::uint64_t pair_index(std::uint64_t hi, std::uint64_t lo) { return (hi << 32) | (lo & 0xffffffffULL); }

double draw(CounterRng & rng, const Range & r) { return r.lo + (r.hi - r.lo) * rng.uniform(); }

/// Square root factor of a PSD matrix, tolerant of zero eigenvalues.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd & M)
{
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  const Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal();
}

Eigen::VectorXd standard_normals(CounterRng & rng, Eigen::Index n)
{
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    z(i) = normal(rng);
  }
  return z;
}

bool valid_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

void check_range(const Range & r, const char * name)
{
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
    throw InputError(std::string("invalid range for ") + name);
  }
}

Eigen::VectorXd state_error(const Eigen::VectorXd & estimate, const StateVector & truth)
{
  Eigen::VectorXd e = estimate - truth;
  e(idx::kYaw) = angle_residual(estimate(idx::kYaw), truth(idx::kYaw));
  return e;
}

}  // namespace

ScenarioConfig ScenarioConfig::defaults()
{
  ScenarioConfig c;
  Eigen::VectorXd q(kStateDim);
  q << 1e-4, 1e-4, 1e-5, 1e-4, 0.0, 0.0, 0.0, 0.01, 1e-5, 0.01, 1e-4;
  c.Q_true = q.asDiagonal();
  c.R_true = TrackerConfig::default_noise().R;
  return c;
}

double ScenarioConfig::position_sigma() const
{
  return std::sqrt(R_true.diagonal().head(3).maxCoeff());
}

void ScenarioConfig::validate() const
{
  if (objects < 0 || frames < 1) {
    throw InputError("scenario needs frames >= 1 and a non-negative object count");
  }
  if (!(dt > 0.0) || !std::isfinite(dt) || !(scene_half_extent > 0.0)) {
    throw InputError("scenario dt and scene extent must be positive");
  }
  if (!valid_probability(rho_c) || !valid_probability(bias_prob)) {
    throw InputError("rho_c and bias_prob must lie in [0, 1]");
  }
  if (!(fp_rate >= 0.0) || !std::isfinite(fp_rate) || !(bias_scale >= 0.0) || !(bias_yaw >= 0.0)) {
    throw InputError("fp_rate, bias_scale and bias_yaw must be non-negative");
  }
  check_range(speed, "speed");
  check_range(accel, "accel");
  check_range(yaw_rate, "yaw_rate");
  check_range(length, "length");
  check_range(width, "width");
  check_range(height, "height");
  check_range(det_score, "det_score");
  check_range(fp_score, "fp_score");
  if (length.lo <= 0.0 || width.lo <= 0.0 || height.lo <= 0.0) {
    throw InputError("object extents must be positive");
  }
  if (Q_true.rows() != kStateDim || Q_true.cols() != kStateDim || !Q_true.allFinite()) {
    throw InputError("Q_true must be a finite 11x11 matrix");
  }
  if (R_true.rows() != kMeasDim || R_true.cols() != kMeasDim || !R_true.allFinite()) {
    throw InputError("R_true must be a finite 7x7 matrix");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> qs(Q_true);
  if (qs.eigenvalues().minCoeff() < -1e-12) {
    throw InputError("Q_true must be positive semi-definite");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rs(R_true);
  if (rs.eigenvalues().minCoeff() < 0.0) {
    throw InputError("R_true must be positive semi-definite");
  }
}

Scenario generate_scenario(const ScenarioConfig & config)
{
  config.validate();
  const Eigen::MatrixXd q_root = psd_sqrt(config.Q_true);
  const Eigen::MatrixXd r_root = psd_sqrt(config.R_true);

  Scenario out;
  out.truth.resize(static_cast<std::size_t>(config.frames));
  out.clean.resize(static_cast<std::size_t>(config.frames));

  for (int k = 0; k < config.objects; ++k) {
    CounterRng init(config.seed, Stream::kScenarioInit, static_cast<std::uint64_t>(k));
    StateVector x = StateVector::Zero();
    x(idx::kPx) = (2.0 * init.uniform() - 1.0) * config.scene_half_extent;
    x(idx::kPy) = (2.0 * init.uniform() - 1.0) * config.scene_half_extent;
    x(idx::kYaw) = normalize_angle((2.0 * init.uniform() - 1.0) * std::numbers::pi);
    x(idx::kLength) = draw(init, config.length);
    x(idx::kWidth) = draw(init, config.width);
    x(idx::kHeight) = draw(init, config.height);
    x(idx::kPz) = 0.5 * x(idx::kHeight);
    x(idx::kSpeed) = draw(init, config.speed);
    x(idx::kAccel) = draw(init, config.accel);
    x(idx::kYawRate) = draw(init, config.yaw_rate);

    for (int f = 0; f < config.frames; ++f) {
      const auto index = pair_index(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(f));
      if (f > 0) {
        CounterRng motion(config.seed, Stream::kMotion, index);
        x = ctra_predict(x, config.dt);
        x += q_root * standard_normals(motion, kStateDim);
        x(idx::kYaw) = normalize_angle(x(idx::kYaw));
      }
      out.truth[f].push_back({k, x});

      CounterRng meas(config.seed, Stream::kMeasurement, index);
      MeasVector y = x.head<kMeasDim>() + r_root * standard_normals(meas, kMeasDim);
      y(idx::kYaw) = normalize_angle(y(idx::kYaw));
      for (int e = idx::kLength; e <= idx::kHeight; ++e) {
        y(e) = std::max(y(e), kMinExtent);
      }
      out.clean[f].push_back(Detection::from_vector(y, draw(meas, config.det_score)));
    }
  }
  return out;
}

ContaminatedFrames contaminate(
  const std::vector<std::vector<Detection>> & clean, const ScenarioConfig & config)
{
  config.validate();
  const double bias_sigma = config.bias_scale * config.position_sigma();
  ContaminatedFrames out;
  out.frames.resize(clean.size());
  out.provenance.resize(clean.size());

  for (std::size_t f = 0; f < clean.size(); ++f) {
    for (std::size_t i = 0; i < clean[f].size(); ++i) {
      CounterRng rng(config.seed, Stream::kContamination, pair_index(f, i));
      std::normal_distribution<double> normal;
      const double u_drop = rng.uniform();
      const double u_bias = rng.uniform();
      const double bx = normal(rng);
      const double by = normal(rng);
      const double bz = normal(rng);
      const double u_yaw = rng.uniform();
      if (u_drop < config.rho_c) {
        continue;
      }
      Detection det = clean[f][i];
      const bool biased = u_bias < config.bias_prob;
      if (biased) {
        det.px += bias_sigma * bx;
        det.py += bias_sigma * by;
        det.pz += bias_sigma * bz;
        det.yaw = normalize_angle(det.yaw + (2.0 * u_yaw - 1.0) * config.bias_yaw);
      }
      out.frames[f].push_back(det);
      out.provenance[f].push_back({static_cast<int>(i), biased});
    }

    if (config.fp_rate > 0.0) {
      CounterRng rng(config.seed, Stream::kFalsePositive, f);
      std::poisson_distribution<int> count(config.fp_rate);
      const int n = count(rng);
      for (int j = 0; j < n; ++j) {
        Detection fp;
        fp.px = (2.0 * rng.uniform() - 1.0) * config.scene_half_extent;
        fp.py = (2.0 * rng.uniform() - 1.0) * config.scene_half_extent;
        fp.yaw = normalize_angle((2.0 * rng.uniform() - 1.0) * std::numbers::pi);
        fp.l = draw(rng, config.length);
        fp.w = draw(rng, config.width);
        fp.h = draw(rng, config.height);
        fp.pz = 0.5 * fp.h;
        fp.score = draw(rng, config.fp_score);
        out.frames[f].push_back(fp);
        out.provenance[f].push_back({-1, false});
      }
    }
  }
  return out;
}

const VariantStats & MonteCarloResult::of(Method method) const
{
  for (const VariantStats & v : variants) {
    if (v.method == method) {
      return v;
    }
  }
  throw InputError("variant not present in Monte Carlo result: " + std::string(to_string(method)));
}

MonteCarloResult run_monte_carlo(const MonteCarloConfig & config)
{
  if (config.runs < 1 || config.steps < 1) {
    throw InputError("Monte Carlo needs runs >= 1 and steps >= 1");
  }
  if (config.variants.empty()) {
    throw InputError("Monte Carlo needs at least one filter variant");
  }
  const Eigen::MatrixXd P0 =
    config.initial_cov.size() > 0 ? config.initial_cov : TrackerConfig::default_birth_cov();

  const auto steps = static_cast<std::size_t>(config.steps);
  const auto nv = config.variants.size();
  std::vector<std::vector<double>> sq_sum(nv, std::vector<double>(steps, 0.0));
  std::vector<std::vector<double>> pos_sum(nv, std::vector<double>(steps, 0.0));
  std::vector<int> survivors(nv, 0);

  MonteCarloResult result;
  result.variants.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    result.variants[v].method = config.variants[v];
    method_params(config.variants[v], config.gamma, config.tau, config.a, config.filter_noise).validate();
  }

  for (int run = 0; run < config.runs; ++run) {
    ScenarioConfig sc = config.scenario;
    sc.objects = 1;
    sc.frames = config.steps + 1;
    sc.fp_rate = 0.0;
    sc.seed = mix64(config.scenario.seed ^ mix64(static_cast<std::uint64_t>(run) + 1));
    const Scenario scenario = generate_scenario(sc);
    const ContaminatedFrames data = contaminate(scenario.clean, sc);

    CounterRng init_rng(sc.seed, Stream::kInitialError);
    Eigen::Vector3d dir = standard_normals(init_rng, 3);
    dir /= std::max(dir.norm(), 1e-12);
    GaussianBelief initial;
    initial.mean = scenario.truth[0][0].state;
    initial.mean.head<3>() += config.initial_error * dir;
    initial.cov = P0;

    for (std::size_t v = 0; v < nv; ++v) {
      ConvUkf filter(
        initial, method_params(config.variants[v], config.gamma, config.tau, config.a, config.filter_noise),
        tracking_transition(MotionModelKind::kCTRA), box_measurement());
      std::vector<double> sq(steps);
      std::vector<double> pos(steps);
      bool diverged = false;
      try {
        for (std::size_t t = 1; t <= steps; ++t) {
          filter.predict(sc.dt);
          if (!data.frames[t].empty()) {
            filter.update(data.frames[t].front().to_vector());
          }
          const Eigen::VectorXd err = state_error(filter.belief().mean, scenario.truth[t][0].state);
          if (!err.allFinite()) {
            diverged = true;
            break;
          }
          sq[t - 1] = err.squaredNorm();
          pos[t - 1] = err.head<3>().squaredNorm();
        }
      } catch (const std::runtime_error &) {
        diverged = true;
      }
      VariantStats & stats = result.variants[v];
      if (diverged) {
        ++stats.divergences;
        stats.run_position_rmse.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      ++survivors[v];
      double run_pos = 0.0;
      for (std::size_t t = 0; t < steps; ++t) {
        sq_sum[v][t] += sq[t];
        pos_sum[v][t] += pos[t];
        run_pos += pos[t];
      }
      stats.run_position_rmse.push_back(std::sqrt(run_pos / static_cast<double>(steps)));
    }
  }

  for (std::size_t v = 0; v < nv; ++v) {
    VariantStats & stats = result.variants[v];
    const double n = survivors[v];
    stats.mean_sq_error.resize(steps);
    stats.running_max.resize(steps);
    stats.position_rmse_step.resize(steps);
    double total_sq = 0.0;
    double total_pos = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < steps; ++t) {
      const double msq = n > 0 ? sq_sum[v][t] / n : std::numeric_limits<double>::quiet_NaN();
      stats.mean_sq_error[t] = msq;
      best = std::max(best, msq);
      stats.running_max[t] = best;
      stats.position_rmse_step[t] =
        n > 0 ? std::sqrt(pos_sum[v][t] / n) : std::numeric_limits<double>::quiet_NaN();
      total_sq += sq_sum[v][t];
      total_pos += pos_sum[v][t];
    }
    const double cells = n * static_cast<double>(steps);
    stats.mean_sq_error_all = cells > 0 ? total_sq / cells : std::numeric_limits<double>::quiet_NaN();
    stats.position_rmse = cells > 0 ? std::sqrt(total_pos / cells) : std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

LineFit fit_line(const std::vector<double> & x, const std::vector<double> & y)
{
  if (x.size() != y.size() || x.size() < 2) {
    throw InputError("line fit needs at least two paired samples");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) {
    throw InputError("line fit needs at least two distinct x values");
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

BoundednessReport boundedness_study(const BoundednessConfig & config)
{
  if (config.noise_scales.empty() || config.initial_errors.empty()) {
    throw InputError("boundedness grid must not be empty");
  }
  BoundednessReport report;
  const double min_scale = *std::min_element(config.noise_scales.begin(), config.noise_scales.end());
  const double min_error = *std::min_element(config.initial_errors.begin(), config.initial_errors.end());
  std::vector<double> noise_x;
  std::vector<double> noise_y;
  std::vector<double> init_x;
  std::vector<double> init_y;

  for (double scale : config.noise_scales) {
    for (double e0 : config.initial_errors) {
      MonteCarloConfig mc = config.base;
      mc.variants = {config.base.variants.front()};
      mc.scenario.R_true = config.base.scenario.R_true * scale * scale;
      mc.filter_noise.R = config.base.filter_noise.R * scale * scale;
      mc.initial_error = e0;
      const VariantStats stats = run_monte_carlo(mc).variants.front();

      BoundednessPoint p;
      p.noise_scale = scale;
      p.initial_error = e0;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mc.scenario.R_true);
      const double bias_sigma = mc.scenario.bias_scale * mc.scenario.position_sigma();
      p.noise_bound = es.eigenvalues().maxCoeff() + mc.scenario.bias_prob * bias_sigma * bias_sigma;
      p.divergences = stats.divergences;
      p.finite = stats.divergences == 0;
      double running = 0.0;
      double at_100 = std::numeric_limits<double>::quiet_NaN();
      double late = 0.0;
      for (std::size_t t = 0; t < stats.mean_sq_error.size(); ++t) {
        const double v = stats.mean_sq_error[t];
        p.finite = p.finite && std::isfinite(v);
        p.max_mean_sq_error = std::max(p.max_mean_sq_error, v);
        running += v;
        const double mean = running / static_cast<double>(t + 1);
        const std::size_t step = t + 1;
        if (step == 100) {
          at_100 = mean;
        }
        if (step >= 1000) {
          late = std::max(late, mean);
        }
      }
      p.late_growth_ratio = (std::isfinite(at_100) && at_100 > 0.0 && stats.mean_sq_error.size() >= 1000)
                              ? late / at_100
                              : 0.0;
      report.all_finite = report.all_finite && p.finite;
      report.worst_late_growth = std::max(report.worst_late_growth, p.late_growth_ratio);
      if (e0 == min_error) {
        noise_x.push_back(p.noise_bound);
        noise_y.push_back(p.max_mean_sq_error);
      }
      if (scale == min_scale) {
        init_x.push_back(e0 * e0);
        init_y.push_back(p.max_mean_sq_error);
      }
      report.points.push_back(p);
    }
  }
  if (noise_x.size() >= 2) {
    report.vs_noise = fit_line(noise_x, noise_y);
  }
  if (init_x.size() >= 2) {
    report.vs_initial_error = fit_line(init_x, init_y);
  }
  return report;
}

BoundednessConfig default_boundedness_config()
{
  BoundednessConfig c;
  ScenarioConfig & sc = c.base.scenario;
  sc = ScenarioConfig::defaults();
  Eigen::VectorXd q(kStateDim);
  q << 1e-4, 1e-4, 1e-5, 1e-5, 0.0, 0.0, 0.0, 1e-3, 0.0, 1e-6, 1e-7;
  sc.Q_true = q.asDiagonal();
  sc.speed = {3.0, 8.0};
  sc.accel = {0.0, 0.0};
  sc.yaw_rate = {-0.05, 0.05};
  sc.rho_c = 0.1;
  sc.bias_prob = 0.1;
  sc.seed = 2026;
  c.base.filter_noise = TrackerConfig::default_noise();
  c.base.variants = {Method::kConvFixed};
  c.base.gamma = 10.0;
  c.base.runs = 8;
  c.base.steps = 10000;
  return c;
}

}  // namespace convtrack
