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

#include "convtrack/tracker.hpp"

#include <cmath>
#include <exception>
#include <limits>

#include "convtrack/errors.hpp"

namespace convtrack {

std::string_view to_string(TrackStatus status)
{
  switch (status) {
    case TrackStatus::kTentative:
      return "tentative";
    case TrackStatus::kConfirmed:
      return "confirmed";
    case TrackStatus::kDead:
      return "dead";
  }
  return "unknown";
}

std::string_view to_string(Method method)
{
  switch (method) {
    case Method::kUkf:
      return "ukf";
    case Method::kConvFixed:
      return "convukf-fixed";
    case Method::kConvAdaptive:
      return "convukf-adaptive";
  }
  return "unknown";
}

Method parse_method(std::string_view name)
{
  if (name == "ukf") {
    return Method::kUkf;
  }
  if (name == "convukf-fixed") {
    return Method::kConvFixed;
  }
  if (name == "convukf-adaptive") {
    return Method::kConvAdaptive;
  }
  throw InputError("unknown method '" + std::string(name) + "'");
}

FilterParams method_params(Method method, double gamma, double tau, double a, const NoiseSpec & noise)
{
  FilterParams p;
  p.a = a;
  p.tau = tau;
  p.noise = noise;
  switch (method) {
    case Method::kUkf:
      p.gamma = std::numeric_limits<double>::infinity();
      p.adaptive = false;
      break;
    case Method::kConvFixed:
      p.gamma = gamma;
      p.adaptive = false;
      break;
    case Method::kConvAdaptive:
      p.gamma = gamma;
      p.adaptive = true;
      break;
  }
  p.validate();
  return p;
}

NoiseSpec TrackerConfig::default_noise()
{
  NoiseSpec noise;
  Eigen::VectorXd q(kStateDim);
  //    px      py      pz      yaw    l     w     h     v_h   v_v   a_h   yaw rate
  q << 0.0025, 0.0025, 0.0025, 0.01, 1e-4, 1e-4, 1e-4, 0.09, 0.01, 0.25, 0.01;
  noise.Q = q.asDiagonal();
  Eigen::VectorXd r(kMeasDim);
  r << 0.0225, 0.0225, 0.0225, 0.0025, 0.0025, 0.0025, 0.0025;
  noise.R = r.asDiagonal();
  return noise;
}

Eigen::MatrixXd TrackerConfig::default_birth_cov()
{
  Eigen::VectorXd p0 = Eigen::VectorXd::Ones(kStateDim);
  p0(idx::kSpeed) = 100.0;
  p0(idx::kClimb) = 100.0;
  return p0.asDiagonal();
}

TrackerConfig TrackerConfig::defaults()
{
  TrackerConfig config;
  config.filter = method_params(Method::kUkf, kDefaultGamma, kDefaultTau, 1.0, default_noise());
  config.birth_cov = default_birth_cov();
  return config;
}

void TrackerConfig::validate() const
{
  filter.validate();
  if (min_hits < 1) {
    throw InputError("min_hits must be at least 1");
  }
  if (max_misses < 0) {
    throw InputError("max_misses must be non-negative");
  }
  if (!(dt > 0.0)) {
    throw InputError("dt must be positive");
  }
  if (filter.noise.Q.rows() != kStateDim || filter.noise.Q.cols() != kStateDim ||
      filter.noise.R.rows() != kMeasDim || filter.noise.R.cols() != kMeasDim)
  {
    throw InputError("tracker noise must be 11x11 (Q) and 7x7 (R)");
  }
  if (birth_cov.rows() != kStateDim || birth_cov.cols() != kStateDim) {
    throw InputError("birth covariance must be 11x11");
  }
}

std::pair<TrackerState, FrameOutput> tracker_step(
  TrackerState state, std::span<const Detection> detections, const TrackerConfig & config)
{
  FrameOutput out;
  out.frame = state.frame;
  const StateTransition transition = tracking_transition(config.motion);
  const MeasurementModel measurement = box_measurement();

  std::vector<Track> & tracks = state.tracks;
  auto kill = [&](Track & t, const std::string & why) {
    t.status = TrackStatus::kDead;
    out.warnings.push_back("track " + std::to_string(t.id) + " dropped: " + why);
  };

  // (1) predict every live track
  for (Track & t : tracks) {
    try {
      t.belief = unscented_predict(t.belief, transition, config.dt, config.filter.noise.Q, config.filter.a);
      t.belief.mean(idx::kYaw) = normalize_angle(t.belief.mean(idx::kYaw));
    } catch (const std::exception & e) {
      kill(t, e.what());
    }
    ++t.age;
  }

  // (2) associate predicted boxes (dead ones get an empty row of zeros)
  std::vector<Box3D> predicted;
  predicted.reserve(tracks.size());
  for (const Track & t : tracks) {
    predicted.push_back(t.status == TrackStatus::kDead ? Box3D{} : Box3D::from_state(StateVector(t.belief.mean)));
  }
  std::vector<Box3D> observed;
  observed.reserve(detections.size());
  for (const Detection & d : detections) {
    validate_detection(d);
    observed.push_back(Box3D::from_detection(d));
  }
  Eigen::MatrixXd sim = similarity_matrix(predicted, observed);
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    if (tracks[i].status == TrackStatus::kDead) {
      sim.row(static_cast<Eigen::Index>(i)).setZero();
    }
  }
  const AssignmentResult assignment = gate_and_match(sim, config.iou_min);
  out.matches = static_cast<int>(assignment.matches.size());
  out.unmatched_tracks = static_cast<int>(assignment.unmatched_tracks.size());
  out.unmatched_detections = static_cast<int>(assignment.unmatched_detections.size());

  // (3) update matched tracks
  for (const Match & m : assignment.matches) {
    Track & t = tracks[m.track];
    const Detection & det = detections[m.detection];
    FilterParams params = config.filter;
    params.gamma = t.gamma;
    try {
      UpdateReport report = convolutional_update(t.belief, det.to_vector(), params, measurement);
      report.posterior.mean(idx::kYaw) = normalize_angle(report.posterior.mean(idx::kYaw));
      t.belief = std::move(report.posterior);
      t.gamma = report.gamma_next;
      ++t.hits;
      t.misses = 0;
      t.score = det.score;
    } catch (const std::exception & e) {
      kill(t, e.what());
    }
  }

  // (4) misses
  for (int i : assignment.unmatched_tracks) {
    Track & t = tracks[i];
    if (t.status == TrackStatus::kDead) {
      continue;
    }
    t.hits = 0;
    ++t.misses;
    if (t.misses > config.max_misses) {
      t.status = TrackStatus::kDead;
    }
  }

  // (6) confirmation, then drop the dead
  std::vector<Track> survivors;
  survivors.reserve(tracks.size() + assignment.unmatched_detections.size());
  for (Track & t : tracks) {
    if (t.status == TrackStatus::kDead) {
      ++out.deaths;
      out.dead_ids.push_back(t.id);
      continue;
    }
    if (t.status == TrackStatus::kTentative && t.hits >= config.min_hits) {
      t.status = TrackStatus::kConfirmed;
    }
    survivors.push_back(std::move(t));
  }

  // (5) births
  for (int j : assignment.unmatched_detections) {
    const Detection & det = detections[j];
    Track t;
    t.id = state.next_id++;
    t.belief.mean = state_from_detection(det);
    t.belief.cov = config.birth_cov;
    t.gamma = config.filter.gamma;
    t.hits = 1;
    t.score = det.score;
    t.status = t.hits >= config.min_hits ? TrackStatus::kConfirmed : TrackStatus::kTentative;
    survivors.push_back(std::move(t));
    ++out.births;
  }

  state.tracks = std::move(survivors);
  for (const Track & t : state.tracks) {
    out.tracks.push_back({t.id, StateVector(t.belief.mean), t.status, t.score, t.misses});
  }
  ++state.frame;
  return {std::move(state), std::move(out)};
}

std::vector<FrameOutput> run_sequence(
  const std::vector<std::vector<Detection>> & frames, const TrackerConfig & config)
{
  config.validate();
  std::vector<FrameOutput> outputs;
  outputs.reserve(frames.size());
  TrackerState state;
  for (const auto & dets : frames) {
    auto [next, out] = tracker_step(std::move(state), dets, config);
    state = std::move(next);
    outputs.push_back(std::move(out));
  }
  return outputs;
}

}  // namespace convtrack
