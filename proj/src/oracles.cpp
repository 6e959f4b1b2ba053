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

#include "convtrack/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "convtrack/errors.hpp"

namespace convtrack::oracle {

double brute_force_min_cost(const Eigen::MatrixXd & cost)
{
  if (cost.rows() == 0 || cost.cols() == 0) {
    return 0.0;
  }
  const bool transpose = cost.rows() > cost.cols();
  const Eigen::MatrixXd c = transpose ? Eigen::MatrixXd(cost.transpose()) : cost;
  std::vector<int> cols(static_cast<std::size_t>(c.cols()));
  std::iota(cols.begin(), cols.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  // every ordering of the columns; the first rows() entries form an assignment
  do {
    double total = 0.0;
    for (Eigen::Index r = 0; r < c.rows(); ++r) {
      total += c(r, cols[static_cast<std::size_t>(r)]);
    }
    best = std::min(best, total);
  } while (std::next_permutation(cols.begin(), cols.end()));
  return best;
}

double assignment_cost(const Eigen::MatrixXd & cost, const std::vector<std::pair<int, int>> & pairs)
{
  double total = 0.0;
  for (const auto & [r, c] : pairs) {
    total += cost(r, c);
  }
  return total;
}

bool point_in_box(const Box3D & box, const Eigen::Vector3d & p)
{
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const double dx = p.x() - box.cx;
  const double dy = p.y() - box.cy;
  const double u = c * dx + s * dy;
  const double v = -s * dx + c * dy;
  return std::abs(u) <= 0.5 * box.l && std::abs(v) <= 0.5 * box.w && std::abs(p.z() - box.cz) <= 0.5 * box.h;
}

double iou_monte_carlo(const Box3D & a, const Box3D & b, long samples, CounterRng & rng)
{
  const double c = std::cos(a.yaw);
  const double s = std::sin(a.yaw);
  long inside = 0;
  for (long i = 0; i < samples; ++i) {
    const double u = (rng.uniform() - 0.5) * a.l;
    const double v = (rng.uniform() - 0.5) * a.w;
    const double z = (rng.uniform() - 0.5) * a.h;
    const Eigen::Vector3d p(a.cx + c * u - s * v, a.cy + s * u + c * v, a.cz + z);
    inside += point_in_box(b, p) ? 1 : 0;
  }
  const double inter = a.volume() * static_cast<double>(inside) / static_cast<double>(samples);
  return inter / (a.volume() + b.volume() - inter);
}

Gaussian kalman_step(
  const Gaussian & prior, const Eigen::MatrixXd & F, const Eigen::MatrixXd & Q, const Eigen::MatrixXd & H,
  const Eigen::MatrixXd & R, const Eigen::VectorXd & y)
{
  const Eigen::VectorXd xp = F * prior.mean;
  const Eigen::MatrixXd Pp = F * prior.cov * F.transpose() + Q;
  const Eigen::MatrixXd S = H * Pp * H.transpose() + R;
  const Eigen::MatrixXd K = Pp * H.transpose() * S.inverse();
  Gaussian post;
  post.mean = xp + K * (y - H * xp);
  post.cov = Pp - K * S * K.transpose();
  return post;
}

namespace {

struct Points
{
  std::vector<Eigen::VectorXd> x;
  std::vector<double> w;
};

Points julier(const Gaussian & g, double a)
{
  const auto n = g.mean.size();
  const Eigen::MatrixXd L = Eigen::LLT<Eigen::MatrixXd>(static_cast<double>(n) * g.cov).matrixL();
  Points pts;
  pts.x.push_back(g.mean);
  pts.w.push_back(1.0 - 1.0 / (a * a));
  for (Eigen::Index i = 0; i < n; ++i) {
    pts.x.push_back(g.mean + a * L.col(i));
    pts.w.push_back(1.0 / (2.0 * static_cast<double>(n) * a * a));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    pts.x.push_back(g.mean - a * L.col(i));
    pts.w.push_back(1.0 / (2.0 * static_cast<double>(n) * a * a));
  }
  return pts;
}

}  // namespace

Gaussian reference_ukf_step(
  const Gaussian & prior, const Transition & f, const Eigen::MatrixXd & Q, const Observation & h,
  const Eigen::MatrixXd & R, const Eigen::VectorXd & y, double a)
{
  const auto n = prior.mean.size();
  const Points p0 = julier(prior, a);
  Gaussian pred{Eigen::VectorXd::Zero(n), Q};
  std::vector<Eigen::VectorXd> fx;
  for (std::size_t i = 0; i < p0.x.size(); ++i) {
    fx.push_back(f(p0.x[i]));
    pred.mean += p0.w[i] * fx.back();
  }
  for (std::size_t i = 0; i < fx.size(); ++i) {
    pred.cov += p0.w[i] * (fx[i] - pred.mean) * (fx[i] - pred.mean).transpose();
  }
  pred.cov = 0.5 * (pred.cov + pred.cov.transpose()).eval();

  const Points p1 = julier(pred, a);
  const auto m = y.size();
  Eigen::VectorXd y_hat = Eigen::VectorXd::Zero(m);
  std::vector<Eigen::VectorXd> hy;
  for (std::size_t i = 0; i < p1.x.size(); ++i) {
    hy.push_back(h(p1.x[i]));
    y_hat += p1.w[i] * hy.back();
  }
  Eigen::MatrixXd Pyy = R;
  Eigen::MatrixXd Pxy = Eigen::MatrixXd::Zero(n, m);
  for (std::size_t i = 0; i < hy.size(); ++i) {
    Pyy += p1.w[i] * (hy[i] - y_hat) * (hy[i] - y_hat).transpose();
    Pxy += p1.w[i] * (p1.x[i] - pred.mean) * (hy[i] - y_hat).transpose();
  }
  const Eigen::MatrixXd K = Pxy * Pyy.inverse();
  Gaussian post;
  post.mean = pred.mean + K * (y - y_hat);
  post.cov = pred.cov - K * Pxy.transpose();
  return post;
}

StateVector ctra_rk4(const StateVector & state, double dt, int substeps)
{
  auto deriv = [](const StateVector & x) {
    StateVector d = StateVector::Zero();
    d(idx::kPx) = x(idx::kSpeed) * std::cos(x(idx::kYaw));
    d(idx::kPy) = x(idx::kSpeed) * std::sin(x(idx::kYaw));
    d(idx::kPz) = x(idx::kClimb);
    d(idx::kYaw) = x(idx::kYawRate);
    d(idx::kSpeed) = x(idx::kAccel);
    return d;
  };
  StateVector x = state;
  const double h = dt / substeps;
  for (int i = 0; i < substeps; ++i) {
    const StateVector k1 = deriv(x);
    const StateVector k2 = deriv(x + 0.5 * h * k1);
    const StateVector k3 = deriv(x + 0.5 * h * k2);
    const StateVector k4 = deriv(x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

BoundAssumptions random_consistent_assumptions(CounterRng & rng)
{
  auto uni = [&rng](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  for (;;) {
    BoundAssumptions a;
    a.f_u = uni(0.1, 3.0);
    a.h_u = uni(0.1, 3.0);
    a.alpha_u = uni(0.5, 2.0);
    a.beta_u = uni(0.5, 2.0);
    a.q_l = uni(0.01, 2.0);
    a.q_u = a.q_l + uni(0.0, 2.0);
    a.r_u = uni(0.01, 5.0);
    a.dr_u = uni(0.0, 5.0);
    a.p_l = uni(0.01, 2.0);
    a.p_u = a.p_l + uni(0.0, 5.0);
    a.dp_l = uni(0.0, 1.0);
    a.dp_u = a.dp_l + uni(0.0, 1.0);
    a.dp_yy_u = uni(0.0, 1.0);
    a.n = 1 + static_cast<int>(rng() % 11);
    a.m = 1 + static_cast<int>(rng() % 7);
    const double p_hat = a.p_u * a.alpha_u * a.alpha_u * a.f_u * a.f_u + a.q_u + a.dp_u;
    if (p_hat >= a.p_l) {
      return a;
    }
  }
}

namespace {

Box3D unit_box(double x, double y)
{
  Box3D b;
  b.cx = x;
  b.cy = y;
  b.cz = 0.5;
  return b;
}

}  // namespace

MetricsFixture fixture_three_frame()
{
  MetricsFixture fx;
  for (int f = 0; f < 3; ++f) {
    fx.gt.push_back({f, {{1, unit_box(0.0, 0.0)}}});
    HypFrame h{f, {}};
    if (f != 1) {
      h.objects.push_back({7, unit_box(0.0, 0.0), 0.9});
    }
    fx.hyp.push_back(h);
  }
  return fx;
}

MetricsFixture fixture_five_frame()
{
  MetricsFixture fx;
  const double score_a[5] = {0.95, 0.90, 0.85, 0.80, 0.75};
  const double score_b[5] = {0.70, 0.65, 0.60, 0.55, 0.50};
  for (int f = 0; f < 5; ++f) {
    const double step = 2.0 * f;
    fx.gt.push_back({f, {{1, unit_box(step, 0.0)}, {2, unit_box(step, 10.0)}}});
    HypFrame h{f, {}};
    h.objects.push_back({11, unit_box(step, 0.0), score_a[f]});
    h.objects.push_back({12, unit_box(step + 0.5, 10.0), score_b[f]});
    if (f == 2) {
      h.objects.push_back({13, unit_box(100.0, 100.0), 0.62});
    }
    fx.hyp.push_back(h);
  }
  return fx;
}

}  // namespace convtrack::oracle
