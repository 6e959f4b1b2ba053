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

#include "convtrack/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "convtrack/errors.hpp"

namespace convtrack {

namespace {

constexpr double kMinExtent = 1e-3;

double cross(const Eigen::Vector2d & a, const Eigen::Vector2d & b) { return a.x() * b.y() - a.y() * b.x(); }

double shoelace(const std::vector<Eigen::Vector2d> & poly)
{
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    twice += cross(poly[i], poly[(i + 1) % poly.size()]);
  }
  return 0.5 * std::abs(twice);
}

}  // namespace

Box3D Box3D::from_detection(const Detection & det)
{
  return Box3D{det.px, det.py, det.pz, det.yaw, det.l, det.w, det.h};
}

Box3D Box3D::from_state(const StateVector & state)
{
  return Box3D{
    state(idx::kPx), state(idx::kPy), state(idx::kPz), normalize_angle(state(idx::kYaw)),
    std::max(state(idx::kLength), kMinExtent), std::max(state(idx::kWidth), kMinExtent),
    std::max(state(idx::kHeight), kMinExtent)};
}

std::array<Eigen::Vector2d, 4> Box3D::footprint() const
{
  const Eigen::Vector2d center(cx, cy);
  const Eigen::Vector2d along(std::cos(yaw) * 0.5 * l, std::sin(yaw) * 0.5 * l);
  const Eigen::Vector2d across(-std::sin(yaw) * 0.5 * w, std::cos(yaw) * 0.5 * w);
  return {center + along + across, center - along + across, center - along - across, center + along - across};
}

void Box3D::validate() const
{
  if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(cz) || !std::isfinite(yaw)) {
    throw InvalidStateError("box has non-finite pose");
  }
  if (!(l > 0.0 && w > 0.0 && h > 0.0) || !std::isfinite(l * w * h)) {
    throw InvalidStateError("box extents must be positive and finite");
  }
}

double convex_intersection_area(std::span<const Eigen::Vector2d> a, std::span<const Eigen::Vector2d> b)
{
  // Sutherland-Hodgman: clip `a` against every edge of the convex `b`.
  std::vector<Eigen::Vector2d> poly(a.begin(), a.end());
  for (std::size_t e = 0; e < b.size() && !poly.empty(); ++e) {
    const Eigen::Vector2d & p0 = b[e];
    const Eigen::Vector2d & p1 = b[(e + 1) % b.size()];
    const Eigen::Vector2d edge = p1 - p0;
    auto side = [&](const Eigen::Vector2d & q) { return cross(edge, q - p0); };

    std::vector<Eigen::Vector2d> clipped;
    clipped.reserve(poly.size() + 2);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Eigen::Vector2d & cur = poly[i];
      const Eigen::Vector2d & nxt = poly[(i + 1) % poly.size()];
      const double sc = side(cur);
      const double sn = side(nxt);
      if (sc >= 0.0) {
        clipped.push_back(cur);
      }
      if ((sc >= 0.0) != (sn >= 0.0)) {
        const double t = sc / (sc - sn);
        clipped.push_back(cur + t * (nxt - cur));
      }
    }
    poly = std::move(clipped);
  }
  return poly.size() < 3 ? 0.0 : shoelace(poly);
}

double iou_3d(const Box3D & a, const Box3D & b)
{
  a.validate();
  b.validate();
  const double z_overlap =
    std::min(a.cz + 0.5 * a.h, b.cz + 0.5 * b.h) - std::max(a.cz - 0.5 * a.h, b.cz - 0.5 * b.h);
  if (z_overlap <= 0.0) {
    return 0.0;
  }
  const auto fa = a.footprint();
  const auto fb = b.footprint();
  const double area = convex_intersection_area(fa, fb);
  if (area <= 0.0) {
    return 0.0;
  }
  const double inter = area * z_overlap;
  const double uni = a.volume() + b.volume() - inter;
  return uni > 0.0 ? std::clamp(inter / uni, 0.0, 1.0) : 0.0;
}

Eigen::MatrixXd similarity_matrix(std::span<const Box3D> tracks, std::span<const Box3D> detections)
{
  Eigen::MatrixXd sim(static_cast<Eigen::Index>(tracks.size()), static_cast<Eigen::Index>(detections.size()));
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    for (std::size_t j = 0; j < detections.size(); ++j) {
      sim(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = iou_3d(tracks[i], detections[j]);
    }
  }
  return sim;
}

std::vector<std::pair<int, int>> hungarian_assign(const Eigen::MatrixXd & cost)
{
  const int rows = static_cast<int>(cost.rows());
  const int cols = static_cast<int>(cost.cols());
  if (rows == 0 || cols == 0) {
    return {};
  }
  if (!cost.allFinite()) {
    throw InputError("hungarian_assign: cost matrix has non-finite entries");
  }
  const int n = std::max(rows, cols);
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(n, n, kPaddingCost);
  c.topLeftCorner(rows, cols) = cost;

  // Shortest augmenting path with potentials; 1-based, index 0 is the
  // virtual source column.
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(n + 1, 0.0);
  std::vector<int> owner(n + 1, 0);  // owner[j]: row assigned to column j
  std::vector<int> way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    owner[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = owner[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) {
          continue;
        }
        const double cur = c(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const int j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::pair<int, int>> pairs;
  for (int j = 1; j <= n; ++j) {
    const int r = owner[j] - 1;
    const int col = j - 1;
    if (r < rows && col < cols) {
      pairs.emplace_back(r, col);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

AssignmentResult gate_and_match(const Eigen::MatrixXd & sim, double iou_min)
{
  const int rows = static_cast<int>(sim.rows());
  const int cols = static_cast<int>(sim.cols());
  AssignmentResult result;
  std::vector<char> row_used(rows, 0);
  std::vector<char> col_used(cols, 0);
  const Eigen::MatrixXd cost = (1.0 - sim.array()).matrix();
  for (const auto & [r, c] : hungarian_assign(cost)) {
    if (sim(r, c) >= iou_min) {
      result.matches.push_back({r, c, sim(r, c)});
      row_used[r] = 1;
      col_used[c] = 1;
    }
  }
  for (int r = 0; r < rows; ++r) {
    if (!row_used[r]) {
      result.unmatched_tracks.push_back(r);
    }
  }
  for (int c = 0; c < cols; ++c) {
    if (!col_used[c]) {
      result.unmatched_detections.push_back(c);
    }
  }
  return result;
}

}  // namespace convtrack
