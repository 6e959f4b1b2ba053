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

#include "convtrack/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <set>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "convtrack/bench.hpp"
#include "convtrack/config_json.hpp"
#include "convtrack/errors.hpp"
#include "convtrack/experiment.hpp"
#include "convtrack/kitti_io.hpp"
#include "convtrack/metrics.hpp"
#include "convtrack/sim.hpp"
#include "convtrack/tracker.hpp"
#include "convtrack/verify.hpp"

namespace convtrack {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Flags
{
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> method;
  std::optional<double> gamma;
  std::optional<double> tau;
  std::optional<double> a;
  std::optional<double> rho_c;
  std::optional<double> iou_min;
  std::string suite;
  std::string detections;
  std::string gt;
  std::string hyp;
  int seeds = 0;
};

AppConfig resolve(const Flags & f)
{
  AppConfig c = f.config.empty() ? AppConfig{} : load_config(f.config);
  if (f.seed) {
    c.seed = *f.seed;
  }
  if (f.method) {
    try {
      c.method = parse_method(*f.method);
    } catch (const InputError & e) {
      throw ConfigError(std::string("--method: ") + e.what());
    }
  }
  if (f.gamma) {
    c.gamma = *f.gamma;
  }
  if (f.tau) {
    c.tau = *f.tau;
  }
  if (f.a) {
    c.a = *f.a;
  }
  if (f.rho_c) {
    c.scenario.rho_c = *f.rho_c;
  }
  if (f.iou_min) {
    c.tracker.iou_min = *f.iou_min;
  }
  c.validate();
  try {
    c.apply();
  } catch (const std::exception & e) {
    throw ConfigError(std::string("filter: ") + e.what());
  }
  return c;
}

fs::path output_dir(const Flags & f)
{
  const fs::path dir(f.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw InputError("cannot create output directory " + dir.string());
  }
  return dir;
}

void write_manifest(const fs::path & dir, const std::string & command, const AppConfig & c, const json & extra)
{
  json m;
  m["command"] = command;
  m["seed"] = c.seed;
  m["config_hash"] = config_hash(c);
  m["config"] = config_to_json(c);
  for (const auto & item : extra.items()) {
    m[item.key()] = item.value();
  }
  atomic_write(dir / "manifest.json", m.dump(2) + "\n");
}

int max_frame(const std::vector<KittiRecord> & records)
{
  int best = -1;
  for (const KittiRecord & r : records) {
    best = std::max(best, r.frame);
  }
  return best;
}

int cmd_sim(const Flags & f, std::ostream & out)
{
  const AppConfig c = resolve(f);
  const fs::path dir = output_dir(f);
  const Scenario scenario = generate_scenario(c.scenario);
  const ContaminatedFrames dets = contaminate(scenario.clean, c.scenario);

  std::vector<KittiRecord> gt;
  for (std::size_t fr = 0; fr < scenario.truth.size(); ++fr) {
    for (const TruthObject & o : scenario.truth[fr]) {
      gt.push_back({static_cast<int>(fr), o.id, c.type, measurement_project(o.state)});
    }
  }
  std::ostringstream gt_text;
  write_records(gt_text, gt);
  std::ostringstream det_text;
  write_detections(det_text, dets.frames, c.type);
  atomic_write(dir / "gt.txt", gt_text.str());
  atomic_write(dir / "detections.txt", det_text.str());

  std::size_t n_dets = 0;
  for (const auto & fr : dets.frames) {
    n_dets += fr.size();
  }
  write_manifest(dir, "sim", c,
    {{"frames", c.scenario.frames}, {"objects", c.scenario.objects}, {"detections", n_dets},
      {"files", {"gt.txt", "detections.txt"}}});
  out << "wrote " << gt.size() << " ground-truth boxes and " << n_dets << " detections to " << dir.string()
      << "\n";
  return kExitOk;
}

int cmd_track(const Flags & f, std::ostream & out)
{
  const AppConfig c = resolve(f);
  const std::vector<KittiRecord> records = parse_records_file(f.detections);
  const int frames = max_frame(records) + 1;
  std::vector<std::vector<Detection>> by_frame(static_cast<std::size_t>(std::max(frames, 0)));
  for (const KittiRecord & r : records) {
    if (c.type.empty() || r.type == c.type) {
      by_frame[static_cast<std::size_t>(r.frame)].push_back(r.box);
    }
  }
  const fs::path dir = output_dir(f);
  const std::vector<FrameOutput> outputs = run_sequence(by_frame, c.tracker);

  std::ostringstream tracks;
  write_tracks(tracks, outputs, c.type);
  std::ostringstream diag;
  std::set<int> ids;
  for (const FrameOutput & o : outputs) {
    int confirmed = 0;
    for (const ReportedTrack & t : o.tracks) {
      confirmed += t.status == TrackStatus::kConfirmed ? 1 : 0;
      if (t.status == TrackStatus::kConfirmed) {
        ids.insert(t.id);
      }
    }
    json e{{"event", "frame"}, {"frame", o.frame}, {"matches", o.matches},
      {"unmatched_tracks", o.unmatched_tracks}, {"unmatched_detections", o.unmatched_detections},
      {"births", o.births}, {"deaths", o.deaths}, {"dead_ids", o.dead_ids}, {"live", o.tracks.size()},
      {"confirmed", confirmed}, {"warnings", o.warnings}};
    diag << e.dump() << "\n";
  }
  atomic_write(dir / "tracks.txt", tracks.str());
  atomic_write(dir / "diagnostics.jsonl", diag.str());
  write_manifest(dir, "track", c,
    {{"detections", f.detections}, {"frames", frames}, {"files", {"tracks.txt", "diagnostics.jsonl"}}});
  out << "tracked " << frames << " frames, " << ids.size() << " confirmed tracks, method "
      << to_string(c.method) << "\n";
  return kExitOk;
}

int cmd_eval(const Flags & f, std::ostream & out)
{
  const AppConfig c = resolve(f);
  std::vector<KittiRecord> gt_rec = parse_records_file(f.gt);
  std::vector<KittiRecord> hyp_rec = parse_records_file(f.hyp);
  if (!c.type.empty()) {
    std::erase_if(gt_rec, [&](const KittiRecord & r) { return r.type != c.type; });
    std::erase_if(hyp_rec, [&](const KittiRecord & r) { return r.type != c.type; });
  }
  const int frames = max_frame(gt_rec) + 1;
  if (max_frame(hyp_rec) >= frames) {
    throw InputError(
      "hypothesis frame " + std::to_string(max_frame(hyp_rec)) + " is beyond the last ground-truth frame " +
      std::to_string(frames - 1));
  }
  const std::vector<GtFrame> gt = gt_frames(gt_rec, frames);
  const std::vector<HypFrame> hyp = hyp_frames(hyp_rec, frames);
  const MetricsReport r = evaluate(gt, hyp, c.recall_levels, c.eval_iou);
  out << metrics_table(r);

  const fs::path dir = output_dir(f);
  const std::string row =
    metrics_csv_row(std::string(to_string(c.method)), fs::path(f.hyp).stem().string(), c.scenario.rho_c,
      static_cast<long long>(c.seed), r);
  atomic_write(dir / "metrics.csv", metrics_csv_header() + "\n" + row + "\n");
  return kExitOk;
}

int cmd_verify(const Flags & f, std::ostream & out)
{
  VerifyOptions opt;
  opt.suite = f.suite;
  if (f.seed) {
    opt.seed = *f.seed;
  }
  if (!f.suite.empty()) {
    const auto & names = suite_names();
    if (std::find(names.begin(), names.end(), f.suite) == names.end()) {
      throw ConfigError("--suite: unknown suite '" + f.suite + "'");
    }
  }
  bool all = true;
  char buf[512];
  for (const SuiteResult & r : run_verify(opt)) {
    all = all && r.passed;
    std::snprintf(buf, sizeof(buf), "%-4s %-10s checks=%-6ld failures=%-4ld worst=%.3e tol=%.1e %.2fs",
      r.passed ? "PASS" : "FAIL", r.name.c_str(), r.checks, r.failures, r.worst, r.tolerance, r.seconds);
    out << buf;
    if (!r.passed) {
      out << "  " << r.detail;
    }
    out << "\n";
  }
  return all ? kExitOk : kExitVerify;
}

int cmd_bench(const Flags & f, std::ostream & out)
{
  const AppConfig c = resolve(f);
  const Method conv = f.method && c.method != Method::kUkf ? c.method : Method::kConvAdaptive;
  const BenchReport r = bench_filters(c.bench_iterations, conv, c.gamma, c.seed);
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-18s mean=%.4f ms  p99=%.4f ms  n=%ld\n", "ukf", r.ukf.mean_ms, r.ukf.p99_ms,
    r.ukf.samples);
  out << buf;
  std::snprintf(buf, sizeof(buf), "%-18s mean=%.4f ms  p99=%.4f ms  n=%ld\n", std::string(to_string(conv)).c_str(),
    r.conv.mean_ms, r.conv.p99_ms, r.conv.samples);
  out << buf;
  std::snprintf(buf, sizeof(buf), "ratio %.3f\n", r.ratio);
  out << buf;
  if (!f.config.empty() || f.out != ".") {
    const fs::path dir = output_dir(f);
    json j{{"ukf", {{"mean_ms", r.ukf.mean_ms}, {"p99_ms", r.ukf.p99_ms}, {"samples", r.ukf.samples}}},
      {"conv", {{"method", std::string(to_string(conv))}, {"mean_ms", r.conv.mean_ms}, {"p99_ms", r.conv.p99_ms},
                 {"samples", r.conv.samples}}},
      {"ratio", r.ratio}};
    atomic_write(dir / "bench.json", j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_robustness(const Flags & f, std::ostream & out)
{
  const AppConfig c = resolve(f);
  RobustnessConfig rc = RobustnessConfig::defaults();
  if (!f.config.empty()) {
    rc.scenario = c.scenario;
    rc.tracker = c.tracker;
  }
  rc.base_seed = c.seed;
  rc.gamma = c.gamma;
  rc.tau = c.tau;
  rc.a = c.a;
  rc.eval_iou = c.eval_iou;
  rc.recall_levels = c.recall_levels;
  if (f.rho_c) {
    rc.rho_levels = {*f.rho_c};
  }
  if (f.seeds > 0) {
    rc.seeds = f.seeds;
  }
  const RobustnessResult res = run_robustness(rc);
  std::ostringstream csv;
  csv << metrics_csv_header() << "\n";
  for (const RobustnessRow & row : res.rows) {
    csv << metrics_csv_row(std::string(to_string(row.method)), "synthetic", row.rho_c,
             static_cast<long long>(row.seed), row.report)
        << "\n";
  }
  const fs::path dir = output_dir(f);
  atomic_write(dir / "robustness.csv", csv.str());
  char buf[256];
  for (const RobustnessSummary & s : res.summaries) {
    std::snprintf(buf, sizeof(buf), "%-18s rho_c=%.2f runs=%d sAMOTA=%.2f AMOTA=%.2f MOTA=%.2f RMSE=%.4f\n",
      std::string(to_string(s.method)).c_str(), s.rho_c, s.runs, s.samota, s.amota, s.mota, s.position_rmse);
    out << buf;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char * const * argv, std::ostream & out, std::ostream & err)
{
  CLI::App app{"3D multi-object tracking toolkit", "convtrack"};
  app.require_subcommand(1, 1);
  Flags f;

  auto common = [&f](CLI::App * sub) {
    sub->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--seed", f.seed, "seed override");
    sub->add_option("--method", f.method, "ukf, convukf-fixed or convukf-adaptive");
    sub->add_option("--gamma", f.gamma, "initial or fixed gamma");
    sub->add_option("--tau", f.tau, "gamma adaptation rate");
    sub->add_option("--a", f.a, "sigma point scaling");
    sub->add_option("--rho-c", f.rho_c, "detection miss probability");
    sub->add_option("--iou-min", f.iou_min, "association IoU gate");
  };

  CLI::App * sim = app.add_subcommand("sim", "simulate ground truth and contaminated detections");
  common(sim);
  CLI::App * track = app.add_subcommand("track", "track a KITTI-format detection file");
  common(track);
  track->add_option("detections", f.detections, "detection file")->required()->check(CLI::ExistingFile);
  CLI::App * eval = app.add_subcommand("eval", "evaluate tracks against ground truth");
  common(eval);
  eval->add_option("gt", f.gt, "ground-truth label file")->required()->check(CLI::ExistingFile);
  eval->add_option("hyp", f.hyp, "tracking result file")->required()->check(CLI::ExistingFile);
  CLI::App * verify = app.add_subcommand("verify", "run the oracle and property suites");
  verify->add_option("--suite", f.suite, "run a single suite");
  verify->add_option("--seed", f.seed, "seed for the randomized suites");
  CLI::App * bench = app.add_subcommand("bench", "time filter updates");
  common(bench);
  CLI::App * robust = app.add_subcommand("robustness", "UKF vs ConvUKF over contaminated synthetic scenes");
  common(robust);
  robust->add_option("--seeds", f.seeds, "number of seeds")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sim->parsed()) {
      return cmd_sim(f, out);
    }
    if (track->parsed()) {
      return cmd_track(f, out);
    }
    if (eval->parsed()) {
      return cmd_eval(f, out);
    }
    if (verify->parsed()) {
      return cmd_verify(f, out);
    }
    if (bench->parsed()) {
      return cmd_bench(f, out);
    }
    if (robust->parsed()) {
      return cmd_robustness(f, out);
    }
  } catch (const ConfigError & e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception & e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace convtrack
