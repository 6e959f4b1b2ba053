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

#include "convtrack/verify.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "convtrack/association.hpp"
#include "convtrack/bounds.hpp"
#include "convtrack/errors.hpp"
#include "convtrack/filter.hpp"
#include "convtrack/likelihood.hpp"
#include "convtrack/metrics.hpp"
#include "convtrack/oracles.hpp"
#include "convtrack/state_models.hpp"

namespace convtrack {

namespace {

class Tally
{
public:
  Tally(SuiteResult & r, double tolerance) : r_(r) { r_.tolerance = tolerance; }

  /// Records one comparison; `error` is measured against the suite tolerance.
  void error(double err, const std::string & what)
  {
    ++r_.checks;
    const bool ok = std::isfinite(err) && err <= r_.tolerance;
    if (std::isfinite(err)) {
      r_.worst = std::max(r_.worst, err);
    } else {
      r_.worst = std::numeric_limits<double>::infinity();
    }
    if (!ok) {
      fail(what + " (error " + std::to_string(err) + ")");
    }
  }

  void expect(bool ok, const std::string & what)
  {
    ++r_.checks;
    if (!ok) {
      fail(what);
    }
  }

  void fail(const std::string & what)
  {
    ++r_.failures;
    r_.passed = false;
    if (r_.detail.empty()) {
      r_.detail = what;
    }
  }

private:
  SuiteResult & r_;
};

Eigen::VectorXd normals(CounterRng & rng, Eigen::Index n)
{
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    z(i) = normal(rng);
  }
  return z;
}

Eigen::MatrixXd random_spd(CounterRng & rng, Eigen::Index n, double floor)
{
  Eigen::MatrixXd A(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    A.col(c) = normals(rng, n);
  }
  return A * A.transpose() / static_cast<double>(n) + floor * Eigen::MatrixXd::Identity(n, n);
}

double max_abs(const Eigen::MatrixXd & m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void suite_likelihood(SuiteResult & r, const VerifyOptions & opt)
{
  Tally t(r, 1e-3);
  const ClosedFormLikelihood closed = opt.closed_form ? opt.closed_form : ClosedFormLikelihood(conv_likelihood_closed);
  const double gammas[] = {0.1, 0.5, 2.0, 10.0};
  for (int d = 1; d <= 2; ++d) {
    Eigen::VectorXd mean(d);
    Eigen::MatrixXd R(d, d);
    if (d == 1) {
      mean << 0.3;
      R << 0.5;
    } else {
      mean << 0.2, -0.1;
      R << 0.6, 0.15, 0.15, 0.4;
    }
    for (double g : gammas) {
      const Eigen::MatrixXd S = R + Eigen::MatrixXd::Identity(d, d) / (2.0 * g);
      const double spread = std::sqrt(S.diagonal().maxCoeff());
      for (int k = 0; k < 21; ++k) {
        Eigen::VectorXd y = mean;
        if (d == 1) {
          y(0) += (-3.0 + 0.3 * k) * spread;
        } else {
          const double angle = 2.0 * std::numbers::pi * k / 21.0;
          const double radius = 3.0 * spread * k / 20.0;
          y(0) += radius * std::cos(angle);
          y(1) += radius * std::sin(angle);
        }
        std::ostringstream what;
        what << "d=" << d << " gamma=" << g << " point " << k;
        try {
          const double ref = conv_likelihood_numeric(y, mean, R, g);
          const double got = closed(y, mean, R, g);
          t.error(std::abs(got - ref) / ref, what.str());
        } catch (const std::exception & e) {
          t.expect(false, what.str() + ": " + e.what());
        }
      }
    }
  }
}

// Smooth nonlinear test system, 4 states and 2 outputs.
Eigen::VectorXd test_f(const Eigen::VectorXd & x)
{
  Eigen::VectorXd out(4);
  out << x(0) + 0.1 * x(1), 0.98 * x(1) + 0.1 * std::sin(x(0)), x(2) + 0.1 * x(3) * std::cos(x(2)),
    0.95 * x(3) + 0.02 * x(0) * x(1);
  return out;
}

Eigen::VectorXd test_h(const Eigen::VectorXd & x)
{
  Eigen::VectorXd out(2);
  out << std::sqrt(x(0) * x(0) + x(2) * x(2) + 1.0), x(1) + 0.1 * x(3) * x(3);
  return out;
}

void suite_conjugate(SuiteResult & r, const VerifyOptions & opt)
{
  Tally t(r, 1e-10);
  StateTransition f{[](const Eigen::VectorXd & x, double) { return test_f(x); }, std::nullopt};
  MeasurementModel h{[](const Eigen::VectorXd & x) { return test_h(x); }, 2, std::nullopt};
  const Eigen::MatrixXd Q = 0.01 * Eigen::MatrixXd::Identity(4, 4);
  const Eigen::MatrixXd R = 0.05 * Eigen::MatrixXd::Identity(2, 2);
  FilterParams params;
  params.noise = {Q, R};
  for (int seed = 0; seed < 100; ++seed) {
    CounterRng rng(opt.seed + static_cast<std::uint64_t>(seed), Stream::kTest);
    Eigen::VectorXd x = normals(rng, 4);
    GaussianBelief belief{x + 0.3 * normals(rng, 4), Eigen::MatrixXd::Identity(4, 4)};
    oracle::Gaussian ref{belief.mean, belief.cov};
    double worst = 0.0;
    try {
      for (int k = 0; k < 100; ++k) {
        x = test_f(x) + 0.1 * normals(rng, 4);
        const Eigen::VectorXd y = test_h(x) + std::sqrt(0.05) * normals(rng, 2);
        const GaussianBelief pred = unscented_predict(belief, f, 1.0, Q, 1.0);
        belief = convolutional_update(pred, y, params, h).posterior;
        ref = oracle::reference_ukf_step(ref, test_f, Q, test_h, R, y, 1.0);
        worst = std::max({worst, max_abs(belief.mean - ref.mean), max_abs(belief.cov - ref.cov)});
      }
      t.error(worst, "seed " + std::to_string(seed));
    } catch (const std::exception & e) {
      t.expect(false, "seed " + std::to_string(seed) + ": " + e.what());
    }
  }
}

void suite_linear(SuiteResult & r, const VerifyOptions & opt)
{
  Tally t(r, 1e-8);
  const double dt = 0.1;
  Eigen::MatrixXd F = Eigen::MatrixXd::Identity(4, 4);
  F(0, 2) = dt;
  F(1, 3) = dt;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2, 4);
  H(0, 0) = 1.0;
  H(1, 1) = 1.0;
  for (int seed = 0; seed < 20; ++seed) {
    CounterRng rng(opt.seed + 1000 + static_cast<std::uint64_t>(seed), Stream::kTest);
    const Eigen::MatrixXd Q = 0.01 * random_spd(rng, 4, 0.1);
    const Eigen::MatrixXd R = 0.1 * random_spd(rng, 2, 0.1);
    StateTransition f{[F](const Eigen::VectorXd & x, double) -> Eigen::VectorXd { return F * x; }, std::nullopt};
    MeasurementModel h{[H](const Eigen::VectorXd & x) -> Eigen::VectorXd { return H * x; }, 2, std::nullopt};
    FilterParams params;
    params.noise = {Q, R};
    Eigen::VectorXd x = normals(rng, 4);
    GaussianBelief belief{Eigen::VectorXd::Zero(4), 2.0 * Eigen::MatrixXd::Identity(4, 4)};
    oracle::Gaussian ref{belief.mean, belief.cov};
    for (int k = 0; k < 100; ++k) {
      x = F * x + 0.1 * normals(rng, 4);
      const Eigen::VectorXd y = H * x + 0.3 * normals(rng, 2);
      belief = convolutional_update(unscented_predict(belief, f, dt, Q, 1.0), y, params, h).posterior;
      ref = oracle::kalman_step(ref, F, Q, H, R, y);
      t.error(std::max(max_abs(belief.mean - ref.mean), max_abs(belief.cov - ref.cov)),
        "seed " + std::to_string(seed) + " step " + std::to_string(k));
    }
  }
}

void suite_sigma(SuiteResult & r, const VerifyOptions & opt)
{
  Tally t(r, 1e-10);
  for (int k = 0; k < 100; ++k) {
    CounterRng rng(opt.seed + 2000 + static_cast<std::uint64_t>(k), Stream::kTest);
    GaussianBelief b{normals(rng, kStateDim), random_spd(rng, kStateDim, 0.05)};
    const double a = 0.5 + 1.5 * rng.uniform();
    const SigmaSet s = julier_sigma_points(b, a);
    const Eigen::VectorXd mean = s.points * s.weights;
    const Eigen::MatrixXd dev = s.points.colwise() - b.mean;
    const Eigen::MatrixXd cov = dev * s.weights.asDiagonal() * dev.transpose();
    t.error(std::max(max_abs(mean - b.mean), max_abs(cov - b.cov)), "matrix " + std::to_string(k));
    t.error(std::abs(s.weights.sum() - 1.0), "weights of matrix " + std::to_string(k));
  }
}

void suite_hungarian(SuiteResult & r, const VerifyOptions & opt)
{
  Tally t(r, 0.0);
  CounterRng rng(opt.seed + 3000, Stream::kTest);
  for (int k = 0; k < 1000; ++k) {
    const auto rows = static_cast<Eigen::Index>(1 + rng() % 7);
    const auto cols = static_cast<Eigen::Index>(1 + rng() % 7);
    Eigen::MatrixXd cost(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        cost(i, j) = static_cast<double>(rng() % 100);
      }
    }
    const auto pairs = hungarian_assign(cost);
    std::set<int> used_r;
    std::set<int> used_c;
    for (const auto & [i, j] : pairs) {
      used_r.insert(i);
      used_c.insert(j);
    }
    const std::string what = "matrix " + std::to_string(k);
    t.expect(
      static_cast<Eigen::Index>(pairs.size()) == std::min(rows, cols) && used_r.size() == pairs.size() &&
        used_c.size() == pairs.size(),
      what + ": not a complete one-to-one assignment");
    t.error(std::abs(oracle::assignment_cost(cost, pairs) - oracle::brute_force_min_cost(cost)), what);
  }
}

void suite_iou(SuiteResult & r, const VerifyOptions & opt)
{
  Tally t(r, 1e-2);
  CounterRng rng(opt.seed + 4000, Stream::kTest);
  auto uni = [&rng](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  for (int k = 0; k < 20; ++k) {
    Box3D a{uni(-2, 2), uni(-2, 2), uni(0, 1), uni(-3.1, 3.1), uni(1, 5), uni(1, 3), uni(1, 2)};
    Box3D b{a.cx + uni(-1.5, 1.5), a.cy + uni(-1.5, 1.5), a.cz + uni(-0.5, 0.5), uni(-3.1, 3.1), uni(1, 5),
      uni(1, 3), uni(1, 2)};
    CounterRng mc(opt.seed + 4100 + static_cast<std::uint64_t>(k), Stream::kTest);
    t.error(std::abs(iou_3d(a, b) - oracle::iou_monte_carlo(a, b, 1000000, mc)), "pair " + std::to_string(k));
  }
}

void suite_ctra(SuiteResult & r, const VerifyOptions & opt)
{
  Tally t(r, 1e-6);
  CounterRng rng(opt.seed + 5000, Stream::kTest);
  auto uni = [&rng](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  const double rates[] = {0.0, 1e-7, 1e-5, 1e-3};
  for (int k = 0; k < 1000; ++k) {
    StateVector x;
    x << uni(-50, 50), uni(-50, 50), uni(0, 2), uni(-3.1, 3.1), uni(1, 5), uni(1, 3), uni(1, 2), uni(-20, 20),
      uni(-1, 1), uni(-3, 3), uni(-1, 1);
    if (k % 4 == 0) {
      x(idx::kYawRate) = rates[(k / 4) % 4] * (k % 8 == 0 ? 1.0 : -1.0);
    }
    const double dt = uni(0.001, 0.1);
    const StateVector got = ctra_predict(x, dt);
    const StateVector ref = oracle::ctra_rk4(x, dt, 200);
    StateVector diff = got - ref;
    diff(idx::kYaw) = angle_residual(got(idx::kYaw), ref(idx::kYaw));
    t.error(max_abs(diff), "state " + std::to_string(k));
  }
  for (int k = 0; k < 100; ++k) {
    StateVector x;
    x << 0, 0, 0, uni(-3.1, 3.1), 4, 2, 1.5, uni(0, 30), 0, uni(-3, 3), 0;
    StateVector below = x;
    StateVector above = x;
    below(idx::kYawRate) = kYawRateEpsilon * (1.0 - 1e-6);
    above(idx::kYawRate) = kYawRateEpsilon * (1.0 + 1e-6);
    t.error(max_abs(ctra_predict(below, 0.1) - ctra_predict(above, 0.1)), "continuity " + std::to_string(k));
  }
}

void suite_metrics(SuiteResult & r, const VerifyOptions &)
{
  Tally t(r, 1e-12);
  const auto three = oracle::fixture_three_frame();
  const ClearMot cm = clear_mot(three.gt, three.hyp);
  t.expect(cm.fn == 1 && cm.fp == 0 && cm.ids == 0 && cm.frag == 1 && cm.tp == 2, "three-frame counts");
  t.error(std::abs(cm.mota() - 2.0 / 3.0), "three-frame MOTA");

  const auto five = oracle::fixture_five_frame();
  const SweepResult sw = amota_sweep(five.gt, five.hyp, 5);
  t.error(std::abs(sw.amota - 0.56), "five-frame AMOTA");
  t.error(std::abs(sw.samota - 0.955), "five-frame sAMOTA");
  t.error(std::abs(sw.amotp - 155.0 / 180.0), "five-frame AMOTP");
  const double mota[] = {0.2, 0.4, 0.6, 0.7, 0.9};
  const double smota[] = {1.0, 1.0, 1.0, 0.875, 0.9};
  const double motp[] = {1.0, 1.0, 16.0 / 18.0, 0.75, 2.0 / 3.0};
  for (std::size_t k = 0; k < 5 && k < sw.points.size(); ++k) {
    const std::string at = " at level " + std::to_string(k + 1);
    t.error(std::abs(sw.points[k].mota - mota[k]), "MOTA" + at);
    t.error(std::abs(sw.points[k].smota - smota[k]), "sMOTA" + at);
    t.error(std::abs(sw.points[k].motp - motp[k]), "MOTP" + at);
  }
  t.expect(sw.points.size() == 5, "five operating points");
}

void suite_bounds(SuiteResult & r, const VerifyOptions & opt)
{
  Tally t(r, 1e-15);
  const BoundConstants c = bound_constants(BoundAssumptions{});
  t.error(std::abs(c.K_u - 2.0), "K_u of the all-ones set");
  t.error(std::abs(c.p_hat_u - 2.0), "p_hat_u of the all-ones set");
  t.error(std::abs(c.lambda - 1.0 / 19.0), "lambda of the all-ones set");
  CounterRng rng(opt.seed + 6000, Stream::kTest);
  for (int k = 0; k < 1000; ++k) {
    const BoundAssumptions a = oracle::random_consistent_assumptions(rng);
    try {
      const BoundConstants b = bound_constants(a);
      t.expect(b.lambda >= 0.0 && b.lambda <= 1.0, "lambda range, set " + std::to_string(k));
      t.expect(b.C1 > 0.0 && b.C2 > 0.0 && b.C3 > 0.0, "positive constants, set " + std::to_string(k));
      t.expect(b.nu_l <= b.nu_u, "nu ordering, set " + std::to_string(k));
    } catch (const std::exception & e) {
      t.expect(false, "set " + std::to_string(k) + ": " + e.what());
    }
  }
}

void suite_adapt(SuiteResult & r, const VerifyOptions &)
{
  Tally t(r, 1e-12);
  t.error(std::abs(adapt_gamma_scalar(1.0, std::exp(-1.0), 0.05, 1) - 0.975), "example at s/m = 1/e");
  t.error(std::abs(adapt_gamma_scalar(1.0, 0.0, 0.05, 1) - 0.98380338726366467), "example at s = 0");
  const double gammas[] = {1e-3, 0.1, 1.0, 5.0, 100.0, 1e4};
  for (double g : gammas) {
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 1000; ++k) {
      const double s = 0.05 * k;
      const double next = adapt_gamma_scalar(g, s * s, 0.05, 3);
      t.expect(next <= prev, "monotonicity at gamma " + std::to_string(g));
      prev = next;
    }
  }
}

using SuiteFn = void (*)(SuiteResult &, const VerifyOptions &);

const std::map<std::string, SuiteFn> & registry()
{
  static const std::map<std::string, SuiteFn> r{
    {"likelihood", suite_likelihood}, {"conjugate", suite_conjugate}, {"linear", suite_linear},
    {"sigma", suite_sigma}, {"hungarian", suite_hungarian}, {"iou", suite_iou}, {"ctra", suite_ctra},
    {"metrics", suite_metrics}, {"bounds", suite_bounds}, {"adapt", suite_adapt}};
  return r;
}

}  // namespace

const std::vector<std::string> & suite_names()
{
  static const std::vector<std::string> names{
    "likelihood", "conjugate", "linear", "sigma", "hungarian", "iou", "ctra", "metrics", "bounds", "adapt"};
  return names;
}

SuiteResult run_suite(const std::string & name, const VerifyOptions & options)
{
  const auto it = registry().find(name);
  if (it == registry().end()) {
    throw InputError("unknown verification suite '" + name + "'");
  }
  SuiteResult r;
  r.name = name;
  const auto start = std::chrono::steady_clock::now();
  try {
    it->second(r, options);
  } catch (const std::exception & e) {
    r.passed = false;
    ++r.failures;
    r.detail = std::string("aborted: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<SuiteResult> run_verify(const VerifyOptions & options)
{
  std::vector<SuiteResult> out;
  if (!options.suite.empty()) {
    out.push_back(run_suite(options.suite, options));
    return out;
  }
  for (const std::string & name : suite_names()) {
    out.push_back(run_suite(name, options));
  }
  return out;
}

}  // namespace convtrack
