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

#include <gtest/gtest.h>

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "convtrack/association.hpp"
#include "convtrack/errors.hpp"
#include "convtrack/oracles.hpp"
#include "convtrack/rng.hpp"

using namespace convtrack;

namespace {

Box3D unit_box(double cx = 0.0, double cy = 0.0, double cz = 0.0, double yaw = 0.0)
{
  return Box3D{cx, cy, cz, yaw, 1.0, 1.0, 1.0};
}

Box3D random_box(CounterRng & rng)
{
  auto u = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  return Box3D{u(-2, 2), u(-2, 2), u(-0.5, 0.5), u(-std::numbers::pi, std::numbers::pi), u(1, 5), u(0.5, 2.5),
    u(0.5, 2)};
}

Box3D rigid(const Box3D & b, double dx, double dy, double dz, double rot)
{
  const double c = std::cos(rot);
  const double s = std::sin(rot);
  Box3D out = b;
  out.cx = c * b.cx - s * b.cy + dx;
  out.cy = s * b.cx + c * b.cy + dy;
  out.cz = b.cz + dz;
  out.yaw = std::remainder(b.yaw + rot, 2.0 * std::numbers::pi);
  return out;
}

double total_cost(const Eigen::MatrixXd & cost, const std::vector<std::pair<int, int>> & pairs)
{
  double sum = 0.0;
  for (const auto & [r, c] : pairs) {
    sum += cost(r, c);
  }
  return sum;
}

}  // namespace

TEST(Iou, IdenticalBoxes)
{
  const Box3D b{1.0, 2.0, 0.5, 0.7, 4.0, 1.8, 1.5};
  EXPECT_NEAR(iou_3d(b, b), 1.0, 1e-12);
}

TEST(Iou, DisjointHeights)
{
  EXPECT_EQ(iou_3d(unit_box(), unit_box(0, 0, 1.5)), 0.0);
}

TEST(Iou, FarApartFootprints)
{
  EXPECT_EQ(iou_3d(unit_box(), unit_box(10.0, 0.0)), 0.0);
}

TEST(Iou, HalfOffsetCubes)
{
  EXPECT_NEAR(iou_3d(unit_box(), unit_box(0.5)), 1.0 / 3.0, 1e-12);
}

TEST(Iou, RotatedSquaresMatchMonteCarlo)
{
  const Box3D a = unit_box();
  const Box3D b = unit_box(0, 0, 0, std::numbers::pi / 4.0);
  // the octagon shared by the two squares has area 2(sqrt(2) - 1)
  const double inter = 2.0 * (std::sqrt(2.0) - 1.0);
  EXPECT_NEAR(iou_3d(a, b), inter / (2.0 - inter), 1e-12);
  CounterRng rng(9, Stream::kTest);
  EXPECT_NEAR(iou_3d(a, b), oracle::iou_monte_carlo(a, b, 1000000, rng), 1e-2);
}

TEST(Iou, SymmetricAndRigidInvariant)
{
  CounterRng rng(10, Stream::kTest);
  for (int k = 0; k < 2000; ++k) {
    const Box3D a = random_box(rng);
    const Box3D b = random_box(rng);
    const double ab = iou_3d(a, b);
    ASSERT_GE(ab, 0.0);
    ASSERT_LE(ab, 1.0);
    ASSERT_NEAR(ab, iou_3d(b, a), 1e-12);
    const double dx = 20.0 * rng.uniform() - 10.0;
    const double dy = 20.0 * rng.uniform() - 10.0;
    const double dz = 2.0 * rng.uniform() - 1.0;
    const double rot = 2.0 * std::numbers::pi * rng.uniform();
    ASSERT_NEAR(ab, iou_3d(rigid(a, dx, dy, dz, rot), rigid(b, dx, dy, dz, rot)), 1e-9);
  }
}

TEST(Iou, RejectsDegenerateBoxes)
{
  Box3D flat = unit_box();
  flat.h = 0.0;
  EXPECT_THROW(iou_3d(flat, unit_box()), InvalidStateError);
}

TEST(SimilarityMatrix, Shapes)
{
  const std::vector<Box3D> tracks{unit_box(), unit_box(5.0)};
  EXPECT_EQ(similarity_matrix(tracks, {}).rows(), 2);
  EXPECT_EQ(similarity_matrix(tracks, {}).cols(), 0);
  const std::vector<Box3D> one{unit_box()};
  const Eigen::MatrixXd same = similarity_matrix(one, one);
  ASSERT_EQ(same.size(), 1);
  EXPECT_NEAR(same(0, 0), 1.0, 1e-12);
}

TEST(SimilarityMatrix, OneOverlappingPair)
{
  const std::vector<Box3D> tracks{unit_box(), unit_box(20.0)};
  const std::vector<Box3D> dets{unit_box(-30.0), unit_box(0.5)};
  const Eigen::MatrixXd sim = similarity_matrix(tracks, dets);
  EXPECT_EQ((sim.array() > 0.0).count(), 1);
  EXPECT_NEAR(sim(0, 1), 1.0 / 3.0, 1e-12);
}

TEST(Hungarian, TwoByTwoExample)
{
  Eigen::MatrixXd cost(2, 2);
  cost << 1, 2, 2, 4;
  auto pairs = hungarian_assign(cost);
  std::sort(pairs.begin(), pairs.end());
  const std::vector<std::pair<int, int>> expected{{0, 1}, {1, 0}};
  EXPECT_EQ(pairs, expected);
  EXPECT_EQ(total_cost(cost, pairs), 4.0);
}

TEST(Hungarian, IdentityLikeCost)
{
  const Eigen::MatrixXd cost = 10.0 * (Eigen::MatrixXd::Ones(5, 5) - Eigen::MatrixXd::Identity(5, 5));
  auto pairs = hungarian_assign(cost);
  std::sort(pairs.begin(), pairs.end());
  ASSERT_EQ(pairs.size(), 5u);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(pairs[i], std::make_pair(i, i));
  }
}

TEST(Hungarian, EmptyMatrix)
{
  EXPECT_TRUE(hungarian_assign(Eigen::MatrixXd(0, 0)).empty());
  EXPECT_TRUE(hungarian_assign(Eigen::MatrixXd(3, 0)).empty());
}

TEST(Hungarian, MatchesBruteForceOnRandomMatrices)
{
  CounterRng rng(11, Stream::kTest);
  for (int k = 0; k < 300; ++k) {
    const int rows = 1 + static_cast<int>(rng() % 6);
    const int cols = 1 + static_cast<int>(rng() % 6);
    Eigen::MatrixXd cost(rows, cols);
    for (int i = 0; i < cost.size(); ++i) {
      cost(i) = rng.uniform();
    }
    const auto pairs = hungarian_assign(cost);
    ASSERT_EQ(static_cast<int>(pairs.size()), std::min(rows, cols));
    std::set<int> used_rows;
    std::set<int> used_cols;
    for (const auto & [r, c] : pairs) {
      ASSERT_TRUE(used_rows.insert(r).second);
      ASSERT_TRUE(used_cols.insert(c).second);
    }
    ASSERT_NEAR(total_cost(cost, pairs), oracle::brute_force_min_cost(cost), 1e-12);
  }
}

TEST(GateAndMatch, SingleEntries)
{
  const AssignmentResult hit = gate_and_match(Eigen::MatrixXd::Constant(1, 1, 0.9), 0.1);
  ASSERT_EQ(hit.matches.size(), 1u);
  EXPECT_EQ(hit.matches[0].similarity, 0.9);
  const AssignmentResult miss = gate_and_match(Eigen::MatrixXd::Constant(1, 1, 0.05), 0.1);
  EXPECT_TRUE(miss.matches.empty());
  EXPECT_EQ(miss.unmatched_tracks, std::vector<int>{0});
  EXPECT_EQ(miss.unmatched_detections, std::vector<int>{0});
}

TEST(GateAndMatch, ThreeTracksTwoDetections)
{
  Eigen::MatrixXd sim = Eigen::MatrixXd::Zero(3, 2);
  sim(0, 1) = 0.8;
  sim(2, 0) = 0.7;
  const AssignmentResult r = gate_and_match(sim, 0.1);
  ASSERT_EQ(r.matches.size(), 2u);
  EXPECT_EQ(r.unmatched_tracks, std::vector<int>{1});
  EXPECT_TRUE(r.unmatched_detections.empty());
  for (const Match & m : r.matches) {
    EXPECT_EQ(m.similarity, sim(m.track, m.detection));
  }
}

TEST(GateAndMatch, ConservesIndices)
{
  CounterRng rng(12, Stream::kTest);
  for (int k = 0; k < 500; ++k) {
    const int b = static_cast<int>(rng() % 7);
    const int d = static_cast<int>(rng() % 7);
    Eigen::MatrixXd sim(b, d);
    for (int i = 0; i < sim.size(); ++i) {
      sim(i) = rng.uniform() < 0.5 ? 0.0 : rng.uniform();
    }
    const double gate = 0.3 * rng.uniform();
    const AssignmentResult r = gate_and_match(sim, gate);
    ASSERT_EQ(r.matches.size() + r.unmatched_tracks.size(), static_cast<std::size_t>(b));
    ASSERT_EQ(r.matches.size() + r.unmatched_detections.size(), static_cast<std::size_t>(d));
    std::set<int> tracks(r.unmatched_tracks.begin(), r.unmatched_tracks.end());
    std::set<int> dets(r.unmatched_detections.begin(), r.unmatched_detections.end());
    for (const Match & m : r.matches) {
      ASSERT_GE(m.similarity, gate);
      ASSERT_TRUE(tracks.insert(m.track).second);
      ASSERT_TRUE(dets.insert(m.detection).second);
    }
  }
}
