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

#include <cstdint>
#include <string>
#include <vector>

#include "convtrack/kitti_io.hpp"
#include "convtrack/metrics.hpp"
#include "convtrack/sim.hpp"
#include "convtrack/tracker.hpp"

namespace convtrack {

std::vector<GtFrame> gt_frames(const Scenario & scenario);
/// Confirmed tracks only, scored by their last matched detection.
std::vector<HypFrame> hyp_frames(const std::vector<FrameOutput> & outputs);
/// Groups labelled records into `frames` consecutive frames starting at 0.
std::vector<GtFrame> gt_frames(const std::vector<KittiRecord> & records, int frames);
std::vector<HypFrame> hyp_frames(const std::vector<KittiRecord> & records, int frames);

/// Multi-object robustness protocol: every seed yields one scenario that is
/// contaminated at each rho_c level and tracked by each method.
struct RobustnessConfig
{
  ScenarioConfig scenario;
  TrackerConfig tracker;
  std::vector<double> rho_levels{0.05, 0.10};
  std::vector<Method> methods{Method::kUkf, Method::kConvAdaptive};
  int seeds = 20;
  std::uint64_t base_seed = 1;
  double gamma = kDefaultGamma;  // initial gamma of ConvUKF tracks
  double tau = kDefaultTau;
  double a = 1.0;
  double eval_iou = kEvalIou;
  int recall_levels = kRecallLevels;

  static RobustnessConfig defaults();
};

struct RobustnessRow
{
  Method method = Method::kUkf;
  double rho_c = 0.0;
  std::uint64_t seed = 0;
  MetricsReport report;
};

struct RobustnessSummary
{
  Method method = Method::kUkf;
  double rho_c = 0.0;
  int runs = 0;
  double samota = 0.0;
  double amota = 0.0;
  double mota = 0.0;
  double position_rmse = 0.0;
};

struct RobustnessResult
{
  std::vector<RobustnessRow> rows;
  std::vector<RobustnessSummary> summaries;
  const RobustnessSummary & at(Method method, double rho_c) const;
};

RobustnessResult run_robustness(const RobustnessConfig & config);

}  // namespace convtrack
