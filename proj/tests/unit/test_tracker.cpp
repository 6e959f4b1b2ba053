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

#include <set>
#include <vector>

#include "convtrack/errors.hpp"
#include "convtrack/experiment.hpp"
#include "convtrack/metrics.hpp"
#include "convtrack/sim.hpp"
#include "convtrack/tracker.hpp"

using namespace convtrack;

namespace {

Detection car(double x, double y)
{
  return Detection{x, y, 0.75, 0.0, 4.0, 1.8, 1.5, 0.9};
}

TrackerConfig config_for(Method method, double gamma = kDefaultGamma)
{
  TrackerConfig c = TrackerConfig::defaults();
  c.filter = method_params(method, gamma, kDefaultTau, 1.0, TrackerConfig::default_noise());
  return c;
}

std::vector<std::vector<Detection>> noisy_frames(std::uint64_t seed, double rho_c)
{
  ScenarioConfig sc = ScenarioConfig::defaults();
  sc.objects = 5;
  sc.frames = 40;
  sc.seed = seed;
  sc.rho_c = rho_c;
  sc.bias_prob = 0.1;
  sc.fp_rate = 1.0;
  return contaminate(generate_scenario(sc).clean, sc).frames;
}

bool same_outputs(const std::vector<FrameOutput> & a, const std::vector<FrameOutput> & b)
{
  if (a.size() != b.size()) {
    return false;
  }
  for (std::size_t f = 0; f < a.size(); ++f) {
    if (a[f].tracks.size() != b[f].tracks.size()) {
      return false;
    }
    for (std::size_t i = 0; i < a[f].tracks.size(); ++i) {
      const ReportedTrack & x = a[f].tracks[i];
      const ReportedTrack & y = b[f].tracks[i];
      if (x.id != y.id || x.status != y.status || x.state != y.state || x.score != y.score) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST(Tracker, ColdStartBirths)
{
  const std::vector<Detection> dets{car(0, 0), car(10, 0)};
  const auto [state, out] = tracker_step({}, dets, TrackerConfig::defaults());
  ASSERT_EQ(out.tracks.size(), 2u);
  EXPECT_EQ(out.tracks[0].id, 0);
  EXPECT_EQ(out.tracks[1].id, 1);
  EXPECT_EQ(out.tracks[0].status, TrackStatus::kTentative);
  EXPECT_EQ(out.births, 2);
  EXPECT_EQ(state.next_id, 2);
}

TEST(Tracker, MissCounterLifecycle)
{
  const TrackerConfig c = TrackerConfig::defaults();
  TrackerState s;
  const std::vector<Detection> one{car(0, 0)};
  for (int f = 0; f < c.min_hits; ++f) {
    s = tracker_step(std::move(s), one, c).first;
  }
  ASSERT_EQ(s.tracks.size(), 1u);
  ASSERT_EQ(s.tracks[0].status, TrackStatus::kConfirmed);
  for (int miss = 1; miss <= c.max_misses; ++miss) {
    auto [next, out] = tracker_step(std::move(s), {}, c);
    s = std::move(next);
    ASSERT_EQ(out.tracks.size(), 1u) << "miss " << miss;
    EXPECT_EQ(out.tracks[0].misses, miss);
  }
  const auto [last, out] = tracker_step(std::move(s), {}, c);
  EXPECT_TRUE(out.tracks.empty());
  EXPECT_EQ(out.deaths, 1);
  EXPECT_EQ(out.dead_ids, std::vector<int>{0});
  EXPECT_TRUE(last.tracks.empty());
}

TEST(Tracker, StationaryObjectConverges)
{
  const std::vector<std::vector<Detection>> frames(10, std::vector<Detection>{car(3.0, -2.0)});
  const auto out = run_sequence(frames, config_for(Method::kConvAdaptive));
  ASSERT_EQ(out.back().tracks.size(), 1u);
  const ReportedTrack & t = out.back().tracks[0];
  EXPECT_EQ(t.id, 0);
  EXPECT_EQ(t.status, TrackStatus::kConfirmed);
  EXPECT_NEAR(t.state(idx::kPx), 3.0, 0.05);
  EXPECT_NEAR(t.state(idx::kPy), -2.0, 0.05);
  EXPECT_NEAR(t.state(idx::kPz), 0.75, 0.05);
}

TEST(Tracker, EmptyAndSingleFrameSequences)
{
  EXPECT_TRUE(run_sequence({}, TrackerConfig::defaults()).empty());
  const auto out = run_sequence({{car(0, 0), car(5, 5), car(-5, 5)}}, TrackerConfig::defaults());
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].tracks.size(), 3u);
  for (const ReportedTrack & t : out[0].tracks) {
    EXPECT_EQ(t.status, TrackStatus::kTentative);
  }
}

TEST(Tracker, CrossingObjectsKeepTheirIds)
{
  // two cars crossing at right angles through the origin, 5 m/s each
  std::vector<std::vector<Detection>> frames;
  std::vector<GtFrame> gt;
  for (int f = 0; f < 60; ++f) {
    const double s = -15.0 + 0.5 * f;
    Detection a = car(s, 0.0);
    Detection b = car(0.0, s + 0.3);
    b.yaw = 1.5707963267948966;
    frames.push_back({a, b});
    gt.push_back({f, {{0, Box3D::from_detection(a)}, {1, Box3D::from_detection(b)}}});
  }
  const auto out = run_sequence(frames, config_for(Method::kConvAdaptive));
  const auto hyp = hyp_frames(out);
  const ClearMot m = clear_mot(gt, hyp);
  EXPECT_EQ(m.ids, 0);
  std::set<int> ids;
  for (const auto & frame : out) {
    for (const auto & t : frame.tracks) {
      ids.insert(t.id);
    }
  }
  EXPECT_EQ(ids.size(), 2u);
}

TEST(Tracker, DeterministicAcrossRuns)
{
  const auto frames = noisy_frames(7, 0.1);
  const TrackerConfig c = config_for(Method::kConvAdaptive);
  EXPECT_TRUE(same_outputs(run_sequence(frames, c), run_sequence(frames, c)));
}

TEST(Tracker, IdsAreNeverReusedAndCountsBalance)
{
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto frames = noisy_frames(seed, 0.3);
    const TrackerConfig c = config_for(Method::kUkf);
    TrackerState s;
    std::set<int> dead;
    std::size_t live = 0;
    for (const auto & dets : frames) {
      auto [next, out] = tracker_step(std::move(s), dets, c);
      s = std::move(next);
      ASSERT_EQ(out.tracks.size(), live - out.deaths + out.births);
      ASSERT_EQ(out.matches + out.unmatched_detections, static_cast<int>(dets.size()));
      live = out.tracks.size();
      for (const auto & t : out.tracks) {
        ASSERT_EQ(dead.count(t.id), 0u) << "id " << t.id << " reused";
      }
      dead.insert(out.dead_ids.begin(), out.dead_ids.end());
    }
  }
}

TEST(Tracker, UkfEqualsConvWithHugeGamma)
{
  const auto frames = noisy_frames(11, 0.1);
  const auto ukf = run_sequence(frames, config_for(Method::kUkf));
  const auto conv = run_sequence(frames, config_for(Method::kConvFixed, 1e300));
  EXPECT_TRUE(same_outputs(ukf, conv));
}

TEST(Tracker, MethodNames)
{
  for (Method m : {Method::kUkf, Method::kConvFixed, Method::kConvAdaptive}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_THROW(parse_method("kalman"), InputError);
}

TEST(Tracker, RejectsBadConfig)
{
  TrackerConfig c = TrackerConfig::defaults();
  c.min_hits = 0;
  EXPECT_THROW(c.validate(), InputError);
  c = TrackerConfig::defaults();
  c.dt = -0.1;
  EXPECT_THROW(c.validate(), InputError);
}
