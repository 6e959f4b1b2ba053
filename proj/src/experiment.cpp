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

#include "convtrack/experiment.hpp"

#include <cmath>

#include "convtrack/errors.hpp"

namespace convtrack {

std::vector<GtFrame> gt_frames(const Scenario & scenario)
{
  std::vector<GtFrame> out;
  for (std::size_t f = 0; f < scenario.truth.size(); ++f) {
    GtFrame g{static_cast<int>(f), {}};
    for (const TruthObject & o : scenario.truth[f]) {
      g.objects.push_back({o.id, Box3D::from_state(o.state)});
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<HypFrame> hyp_frames(const std::vector<FrameOutput> & outputs)
{
  std::vector<HypFrame> out;
  for (const FrameOutput & frame : outputs) {
    HypFrame h{frame.frame, {}};
    for (const ReportedTrack & t : frame.tracks) {
      if (t.status == TrackStatus::kConfirmed) {
        h.objects.push_back({t.id, Box3D::from_state(t.state), t.score});
      }
    }
    out.push_back(std::move(h));
  }
  return out;
}

namespace {

void check_frame(const KittiRecord & r, int frames)
{
  if (r.frame >= frames) {
    throw InputError("record frame " + std::to_string(r.frame) + " outside 0.." + std::to_string(frames - 1));
  }
}

}  // namespace

std::vector<GtFrame> gt_frames(const std::vector<KittiRecord> & records, int frames)
{
  std::vector<GtFrame> out;
  for (int f = 0; f < frames; ++f) {
    out.push_back({f, {}});
  }
  for (const KittiRecord & r : records) {
    check_frame(r, frames);
    out[static_cast<std::size_t>(r.frame)].objects.push_back({r.id, Box3D::from_detection(r.box)});
  }
  return out;
}

std::vector<HypFrame> hyp_frames(const std::vector<KittiRecord> & records, int frames)
{
  std::vector<HypFrame> out;
  for (int f = 0; f < frames; ++f) {
    out.push_back({f, {}});
  }
  for (const KittiRecord & r : records) {
    check_frame(r, frames);
    out[static_cast<std::size_t>(r.frame)].objects.push_back({r.id, Box3D::from_detection(r.box), r.box.score});
  }
  return out;
}

RobustnessConfig RobustnessConfig::defaults()
{
  RobustnessConfig c;
  c.scenario = ScenarioConfig::defaults();
  c.scenario.objects = 8;
  c.scenario.frames = 100;
  c.scenario.bias_prob = 0.1;
  c.scenario.fp_rate = 1.0;
  c.tracker = TrackerConfig::defaults();
  return c;
}

const RobustnessSummary & RobustnessResult::at(Method method, double rho_c) const
{
  for (const RobustnessSummary & s : summaries) {
    if (s.method == method && s.rho_c == rho_c) {
      return s;
    }
  }
  throw InputError("no summary for the requested method and rho_c");
}

RobustnessResult run_robustness(const RobustnessConfig & config)
{
  if (config.seeds < 1 || config.rho_levels.empty() || config.methods.empty()) {
    throw InputError("robustness study needs seeds, rho_c levels and methods");
  }
  RobustnessResult result;
  for (double rho : config.rho_levels) {
    for (Method m : config.methods) {
      result.summaries.push_back({m, rho, 0, 0.0, 0.0, 0.0, 0.0});
    }
  }

  for (int s = 0; s < config.seeds; ++s) {
    ScenarioConfig sc = config.scenario;
    sc.seed = config.base_seed + static_cast<std::uint64_t>(s);
    const Scenario scenario = generate_scenario(sc);
    const std::vector<GtFrame> gt = gt_frames(scenario);
    for (double rho : config.rho_levels) {
      sc.rho_c = rho;
      const ContaminatedFrames dets = contaminate(scenario.clean, sc);
      for (Method m : config.methods) {
        TrackerConfig tc = config.tracker;
        tc.filter = method_params(m, config.gamma, config.tau, config.a, config.tracker.filter.noise);
        const std::vector<HypFrame> hyp = hyp_frames(run_sequence(dets.frames, tc));
        RobustnessRow row{m, rho, sc.seed, evaluate(gt, hyp, config.recall_levels, config.eval_iou)};
        for (RobustnessSummary & sum : result.summaries) {
          if (sum.method == m && sum.rho_c == rho) {
            ++sum.runs;
            sum.samota += row.report.samota;
            sum.amota += row.report.amota;
            sum.mota += row.report.mota;
            sum.position_rmse += row.report.position_rmse;
          }
        }
        result.rows.push_back(row);
      }
    }
  }
  for (RobustnessSummary & sum : result.summaries) {
    const double n = sum.runs;
    sum.samota /= n;
    sum.amota /= n;
    sum.mota /= n;
    sum.position_rmse /= n;
  }
  return result;
}

}  // namespace convtrack
