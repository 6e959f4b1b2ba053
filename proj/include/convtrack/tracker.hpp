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
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "convtrack/association.hpp"
#include "convtrack/filter.hpp"
#include "convtrack/state_models.hpp"

namespace convtrack {

enum class TrackStatus { kTentative, kConfirmed, kDead };

std::string_view to_string(TrackStatus status);

/// The three filter configurations compared throughout: plain UKF (no
/// inflation), ConvUKF with a fixed gamma, and ConvUKF with adaptive gamma.
enum class Method { kUkf, kConvFixed, kConvAdaptive };

std::string_view to_string(Method method);
/// Accepts "ukf", "convukf-fixed", "convukf-adaptive"; throws InputError otherwise.
Method parse_method(std::string_view name);

inline constexpr double kDefaultGamma = 1.0;

/// Filter parameters for `method`. `gamma` is ignored for kUkf.
FilterParams method_params(Method method, double gamma, double tau, double a, const NoiseSpec & noise);

struct Track
{
  int id = 0;
  GaussianBelief belief;
  double gamma = 0.0;
  int hits = 0;    // consecutive matched frames
  int age = 0;     // frames since birth
  int misses = 0;  // frames since last match
  double score = 0.0;
  TrackStatus status = TrackStatus::kTentative;
};

struct TrackerConfig
{
  FilterParams filter;
  MotionModelKind motion = MotionModelKind::kCTRA;
  double dt = 0.1;
  double iou_min = kDefaultIouGate;
  int min_hits = 3;
  int max_misses = 2;
  Eigen::MatrixXd birth_cov;

  /// Defaults used by the CLI and the experiments; filter is plain UKF.
  static TrackerConfig defaults();
  static NoiseSpec default_noise();
  static Eigen::MatrixXd default_birth_cov();

  void validate() const;
};

struct ReportedTrack
{
  int id = 0;
  StateVector state;
  TrackStatus status = TrackStatus::kTentative;
  double score = 0.0;
  int misses = 0;
};

struct FrameOutput
{
  int frame = 0;
  std::vector<ReportedTrack> tracks;  // live tracks only
  int matches = 0;
  int unmatched_tracks = 0;
  int unmatched_detections = 0;
  int births = 0;
  int deaths = 0;
  std::vector<int> dead_ids;
  std::vector<std::string> warnings;
};

/// Everything carried from one frame to the next.
struct TrackerState
{
  std::vector<Track> tracks;
  int next_id = 0;
  int frame = 0;
};

/// One predict / associate / update / birth-death cycle.
std::pair<TrackerState, FrameOutput> tracker_step(
  TrackerState state, std::span<const Detection> detections, const TrackerConfig & config);

std::vector<FrameOutput> run_sequence(
  const std::vector<std::vector<Detection>> & frames, const TrackerConfig & config);

}  // namespace convtrack
