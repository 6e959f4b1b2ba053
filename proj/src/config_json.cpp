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

#include "convtrack/config_json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "convtrack/errors.hpp"

namespace convtrack {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string & field, const std::string & what)
{
  throw ConfigError("config field '" + field + "': " + what);
}

void reject_unknown(const json & obj, const std::string & scope, const std::set<std::string> & known)
{
  if (!obj.is_object()) {
    fail(scope.empty() ? "<root>" : scope, "expected an object");
  }
  for (const auto & item : obj.items()) {
    if (known.count(item.key()) == 0) {
      fail(scope.empty() ? item.key() : scope + "." + item.key(), "unknown field");
    }
  }
}

std::string path_of(const std::string & scope, const std::string & key)
{
  return scope.empty() ? key : scope + "." + key;
}

template <typename T>
void read(const json & obj, const std::string & scope, const std::string & key, T & out)
{
  const auto it = obj.find(key);
  if (it == obj.end()) {
    return;
  }
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!it->is_number()) {
        fail(path_of(scope, key), "expected a number");
      }
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer()) {
        fail(path_of(scope, key), "expected an integer");
      }
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!it->is_string()) {
        fail(path_of(scope, key), "expected a string");
      }
    }
    out = it->template get<T>();
  } catch (const json::exception & e) {
    fail(path_of(scope, key), e.what());
  }
}

void read_range(const json & obj, const std::string & scope, const std::string & key, Range & out)
{
  const auto it = obj.find(key);
  if (it == obj.end()) {
    return;
  }
  if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
    fail(path_of(scope, key), "expected [lo, hi]");
  }
  out.lo = (*it)[0].get<double>();
  out.hi = (*it)[1].get<double>();
}

void read_diag(const json & obj, const std::string & scope, const std::string & key, int n, Eigen::MatrixXd & out)
{
  const auto it = obj.find(key);
  if (it == obj.end()) {
    return;
  }
  if (!it->is_array() || static_cast<int>(it->size()) != n) {
    fail(path_of(scope, key), "expected an array of " + std::to_string(n) + " numbers");
  }
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) {
    if (!(*it)[i].is_number()) {
      fail(path_of(scope, key), "expected numbers");
    }
    d(i) = (*it)[i].get<double>();
  }
  out = d.asDiagonal();
}

json diag_json(const Eigen::MatrixXd & m)
{
  json arr = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    arr.push_back(m(i, i));
  }
  return arr;
}

json range_json(const Range & r) { return json::array({r.lo, r.hi}); }

}  // namespace

void AppConfig::apply()
{
  scenario.seed = seed;
  tracker.filter = method_params(method, gamma, tau, a, tracker.filter.noise);
}

void AppConfig::validate() const
{
  auto guard = [](const std::string & field, auto && fn) {
    try {
      fn();
    } catch (const ConfigError &) {
      throw;
    } catch (const std::exception & e) {
      fail(field, e.what());
    }
  };
  guard("scenario", [&] { scenario.validate(); });
  guard("tracker", [&] { tracker.validate(); });
  if (!(gamma > 0.0)) {
    fail("filter.gamma", "must be positive");
  }
  if (!(tau > 0.0 && tau < 1.0)) {
    fail("filter.tau", "must lie in (0, 1)");
  }
  if (!(a > 0.0) || !std::isfinite(a)) {
    fail("filter.a", "must be positive");
  }
  if (!(eval_iou > 0.0 && eval_iou <= 1.0)) {
    fail("eval.iou_match", "must lie in (0, 1]");
  }
  if (recall_levels < 1) {
    fail("eval.recall_levels", "must be at least 1");
  }
  if (bench_iterations < 1) {
    fail("bench.iterations", "must be at least 1");
  }
}

AppConfig config_from_json(const json & j)
{
  AppConfig c;
  reject_unknown(j, "", {"seed", "scenario", "tracker", "filter", "eval", "bench", "type"});
  read(j, "", "seed", c.seed);
  read(j, "", "type", c.type);

  if (j.contains("scenario")) {
    const json & s = j.at("scenario");
    const std::string sc = "scenario";
    reject_unknown(s, sc,
      {"objects", "frames", "dt", "scene_half_extent", "speed", "accel", "yaw_rate", "length", "width",
        "height", "det_score", "fp_score", "q_true_diag", "r_true_diag", "rho_c", "bias_prob", "bias_scale",
        "bias_yaw", "fp_rate"});
    ScenarioConfig & o = c.scenario;
    read(s, sc, "objects", o.objects);
    read(s, sc, "frames", o.frames);
    read(s, sc, "dt", o.dt);
    read(s, sc, "scene_half_extent", o.scene_half_extent);
    read_range(s, sc, "speed", o.speed);
    read_range(s, sc, "accel", o.accel);
    read_range(s, sc, "yaw_rate", o.yaw_rate);
    read_range(s, sc, "length", o.length);
    read_range(s, sc, "width", o.width);
    read_range(s, sc, "height", o.height);
    read_range(s, sc, "det_score", o.det_score);
    read_range(s, sc, "fp_score", o.fp_score);
    read_diag(s, sc, "q_true_diag", kStateDim, o.Q_true);
    read_diag(s, sc, "r_true_diag", kMeasDim, o.R_true);
    read(s, sc, "rho_c", o.rho_c);
    read(s, sc, "bias_prob", o.bias_prob);
    read(s, sc, "bias_scale", o.bias_scale);
    read(s, sc, "bias_yaw", o.bias_yaw);
    read(s, sc, "fp_rate", o.fp_rate);
  }

  if (j.contains("tracker")) {
    const json & t = j.at("tracker");
    const std::string sc = "tracker";
    reject_unknown(t, sc, {"dt", "iou_min", "min_hits", "max_misses", "motion", "q_diag", "r_diag", "birth_cov_diag"});
    TrackerConfig & o = c.tracker;
    read(t, sc, "dt", o.dt);
    read(t, sc, "iou_min", o.iou_min);
    read(t, sc, "min_hits", o.min_hits);
    read(t, sc, "max_misses", o.max_misses);
    std::string motion = o.motion == MotionModelKind::kCTRA ? "ctra" : "cv";
    read(t, sc, "motion", motion);
    if (motion == "ctra") {
      o.motion = MotionModelKind::kCTRA;
    } else if (motion == "cv") {
      o.motion = MotionModelKind::kCV;
    } else {
      fail("tracker.motion", "expected \"ctra\" or \"cv\"");
    }
    read_diag(t, sc, "q_diag", kStateDim, o.filter.noise.Q);
    read_diag(t, sc, "r_diag", kMeasDim, o.filter.noise.R);
    read_diag(t, sc, "birth_cov_diag", kStateDim, o.birth_cov);
  }

  if (j.contains("filter")) {
    const json & f = j.at("filter");
    reject_unknown(f, "filter", {"method", "gamma", "tau", "a"});
    std::string method(to_string(c.method));
    read(f, "filter", "method", method);
    try {
      c.method = parse_method(method);
    } catch (const InputError & e) {
      fail("filter.method", e.what());
    }
    read(f, "filter", "gamma", c.gamma);
    read(f, "filter", "tau", c.tau);
    read(f, "filter", "a", c.a);
  }

  if (j.contains("eval")) {
    const json & e = j.at("eval");
    reject_unknown(e, "eval", {"iou_match", "recall_levels"});
    read(e, "eval", "iou_match", c.eval_iou);
    read(e, "eval", "recall_levels", c.recall_levels);
  }

  if (j.contains("bench")) {
    const json & b = j.at("bench");
    reject_unknown(b, "bench", {"iterations"});
    read(b, "bench", "iterations", c.bench_iterations);
  }

  try {
    c.apply();
  } catch (const std::exception & e) {
    fail("filter", e.what());
  }
  c.validate();
  return c;
}

AppConfig load_config(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error & e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const AppConfig & c)
{
  const ScenarioConfig & s = c.scenario;
  const TrackerConfig & t = c.tracker;
  json j;
  j["seed"] = c.seed;
  j["type"] = c.type;
  j["scenario"] = {
    {"objects", s.objects}, {"frames", s.frames}, {"dt", s.dt}, {"scene_half_extent", s.scene_half_extent},
    {"speed", range_json(s.speed)}, {"accel", range_json(s.accel)}, {"yaw_rate", range_json(s.yaw_rate)},
    {"length", range_json(s.length)}, {"width", range_json(s.width)}, {"height", range_json(s.height)},
    {"det_score", range_json(s.det_score)}, {"fp_score", range_json(s.fp_score)},
    {"q_true_diag", diag_json(s.Q_true)}, {"r_true_diag", diag_json(s.R_true)}, {"rho_c", s.rho_c},
    {"bias_prob", s.bias_prob}, {"bias_scale", s.bias_scale}, {"bias_yaw", s.bias_yaw}, {"fp_rate", s.fp_rate}};
  j["tracker"] = {
    {"dt", t.dt}, {"iou_min", t.iou_min}, {"min_hits", t.min_hits}, {"max_misses", t.max_misses},
    {"motion", t.motion == MotionModelKind::kCTRA ? "ctra" : "cv"}, {"q_diag", diag_json(t.filter.noise.Q)},
    {"r_diag", diag_json(t.filter.noise.R)}, {"birth_cov_diag", diag_json(t.birth_cov)}};
  j["filter"] = {{"method", std::string(to_string(c.method))}, {"gamma", c.gamma}, {"tau", c.tau}, {"a", c.a}};
  j["eval"] = {{"iou_match", c.eval_iou}, {"recall_levels", c.recall_levels}};
  j["bench"] = {{"iterations", c.bench_iterations}};
  return j;
}

std::uint64_t fnv1a64(const std::string & bytes)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const AppConfig & config)
{
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(config_to_json(config).dump())));
  return buf;
}

}  // namespace convtrack
