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

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "convtrack/association.hpp"

namespace convtrack {

struct GtObject
{
  int id = 0;
  Box3D box;
};

struct HypObject
{
  int id = 0;
  Box3D box;
  double score = 1.0;
};

struct GtFrame
{
  int frame = 0;
  std::vector<GtObject> objects;
};

struct HypFrame
{
  int frame = 0;
  std::vector<HypObject> objects;
};

inline constexpr double kEvalIou = 0.25;
inline constexpr int kRecallLevels = 40;

/// Raw CLEAR-MOT accumulation. Ratios are fractions in [0, 1] (MOTA may be
/// negative); the percent view lives in MetricsReport.
struct ClearMot
{
  int total_gt = 0;
  int tp = 0;
  int fp = 0;
  int fn = 0;
  int ids = 0;
  int frag = 0;
  int gt_tracks = 0;
  int mostly_tracked = 0;
  int mostly_lost = 0;
  double iou_sum = 0.0;
  double sq_center_error_sum = 0.0;
  std::vector<double> matched_scores;  // score of every matched hypothesis

  double mota() const;
  double motp() const;
  double mt() const;
  double ml() const;
  double recall() const;
  /// Root mean squared 3D center distance over matched pairs.
  double position_rmse() const;
};

/// Frame-by-frame matching with continuity preference and Hungarian on the
/// remainder (IoU >= iou_match required). Hypotheses scoring below
/// `min_score` are ignored. Throws InputError on misaligned sequences.
ClearMot clear_mot(
  std::span<const GtFrame> gt, std::span<const HypFrame> hyp, double iou_match = kEvalIou,
  double min_score = -std::numeric_limits<double>::infinity());

struct OperatingPoint
{
  double recall_level = 0.0;  // target r = k / L
  double threshold = 0.0;
  bool reached = false;
  double mota = 0.0;
  double smota = 0.0;
  double motp = 0.0;
};

struct SweepResult
{
  double samota = 0.0;  // fractions
  double amota = 0.0;
  double amotp = 0.0;
  bool degenerate_scores = false;
  std::vector<OperatingPoint> points;
};

/// Recall-swept accuracy. Thresholds are the matched-hypothesis scores that
/// first reach recall k/L; unreachable levels contribute zero.
SweepResult amota_sweep(
  std::span<const GtFrame> gt, std::span<const HypFrame> hyp, int levels = kRecallLevels,
  double iou_match = kEvalIou);

/// All reported quantities, ratios in percent.
struct MetricsReport
{
  double samota = 0.0;
  double amota = 0.0;
  double amotp = 0.0;
  double mota = 0.0;
  double motp = 0.0;
  double mt = 0.0;
  double ml = 0.0;
  int ids = 0;
  int frag = 0;
  int fp = 0;
  int fn = 0;
  double position_rmse = 0.0;
};

MetricsReport evaluate(
  std::span<const GtFrame> gt, std::span<const HypFrame> hyp, int levels = kRecallLevels,
  double iou_match = kEvalIou);

std::string metrics_csv_header();
std::string metrics_csv_row(
  const std::string & method, const std::string & scenario, double rho_c, long long seed,
  const MetricsReport & report);
std::string metrics_table(const MetricsReport & report);

}  // namespace convtrack
