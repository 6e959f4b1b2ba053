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
#include <array>
#include <span>
#include <utility>
#include <vector>

#include "convtrack/state_models.hpp"

namespace convtrack {

struct Box3D
{
  double cx = 0.0;
  double cy = 0.0;
  double cz = 0.0;
  double yaw = 0.0;
  double l = 1.0;
  double w = 1.0;
  double h = 1.0;

  static Box3D from_detection(const Detection & det);
  /// Box of the first seven state components; extents are floored at a small
  /// positive value so that transiently shrunken estimates stay usable.
  static Box3D from_state(const StateVector & state);

  double volume() const { return l * w * h; }
  /// Ground-plane footprint corners in counter-clockwise order.
  std::array<Eigen::Vector2d, 4> footprint() const;
  /// Throws InvalidStateError for non-finite fields or non-positive extents.
  void validate() const;
};

struct Match
{
  int track = 0;
  int detection = 0;
  double similarity = 0.0;
};

struct AssignmentResult
{
  std::vector<Match> matches;
  std::vector<int> unmatched_tracks;
  std::vector<int> unmatched_detections;
};

inline constexpr double kDefaultIouGate = 0.01;
inline constexpr double kPaddingCost = 1e6;

/// Area of the intersection of two convex polygons given counter-clockwise.
double convex_intersection_area(std::span<const Eigen::Vector2d> a, std::span<const Eigen::Vector2d> b);

/// Intersection over union of two yaw-rotated boxes: footprint overlap
/// times vertical overlap, divided by the union volume.
double iou_3d(const Box3D & a, const Box3D & b);

Eigen::MatrixXd similarity_matrix(std::span<const Box3D> tracks, std::span<const Box3D> detections);

/// Minimum-cost one-to-one assignment (Kuhn-Munkres). Rectangular input is
/// padded with kPaddingCost; only pairs inside the original shape are
/// returned, as (row, col).
std::vector<std::pair<int, int>> hungarian_assign(const Eigen::MatrixXd & cost);

/// Hungarian matching on 1 - similarity; matches below `iou_min` are split
/// back into unmatched tracks and detections.
AssignmentResult gate_and_match(const Eigen::MatrixXd & sim, double iou_min = kDefaultIouGate);

}  // namespace convtrack
