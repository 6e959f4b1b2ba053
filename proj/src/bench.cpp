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

#include "convtrack/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <vector>

#include "convtrack/errors.hpp"
#include "convtrack/filter.hpp"
#include "convtrack/rng.hpp"

namespace convtrack {

namespace {

constexpr long kBlock = 1000;

LatencyStats summarize(std::vector<double> & ms)
{
  LatencyStats s;
  s.samples = static_cast<long>(ms.size());
  if (ms.empty()) {
    return s;
  }
  double sum = 0.0;
  for (double v : ms) {
    sum += v;
  }
  s.mean_ms = sum / static_cast<double>(ms.size());
  const auto k = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(ms.size()))) - 1;
  std::nth_element(ms.begin(), ms.begin() + static_cast<std::ptrdiff_t>(k), ms.end());
  s.p99_ms = ms[k];
  return s;
}

}  // namespace

BenchReport bench_filters(long iterations, Method conv_method, double gamma, std::uint64_t seed)
{
  if (iterations < 1) {
    throw InputError("benchmark needs at least one iteration");
  }
  const TrackerConfig base = TrackerConfig::defaults();
  const NoiseSpec noise = base.filter.noise;
  const FilterParams ukf_params = method_params(Method::kUkf, gamma, kDefaultTau, 1.0, noise);
  const FilterParams conv_params = method_params(conv_method, gamma, kDefaultTau, 1.0, noise);
  const double dt = 0.1;

  StateVector start;
  start << 0, 0, 0.8, 0.3, 4.2, 1.8, 1.6, 8.0, 0.0, 0.2, 0.05;
  CounterRng rng(seed, Stream::kMeasurement);
  std::normal_distribution<double> normal;

  std::vector<double> ukf_ms;
  std::vector<double> conv_ms;
  ukf_ms.reserve(static_cast<std::size_t>(iterations));
  conv_ms.reserve(static_cast<std::size_t>(iterations));

  bool conv_turn = false;
  while (static_cast<long>(conv_ms.size()) < iterations || static_cast<long>(ukf_ms.size()) < iterations) {
    std::vector<double> & out = conv_turn ? conv_ms : ukf_ms;
    const FilterParams & params = conv_turn ? conv_params : ukf_params;
    conv_turn = !conv_turn;
    if (static_cast<long>(out.size()) >= iterations) {
      continue;
    }
    ConvUkf filter({start, base.birth_cov}, params, tracking_transition(MotionModelKind::kCTRA), box_measurement());
    StateVector truth = start;
    const long n = std::min(kBlock, iterations - static_cast<long>(out.size()));
    for (long i = 0; i < n; ++i) {
      truth = ctra_predict(truth, dt);
      Eigen::VectorXd y = truth.head<kMeasDim>();
      for (Eigen::Index k = 0; k < y.size(); ++k) {
        y(k) += std::sqrt(noise.R(k, k)) * normal(rng);
      }
      const auto t0 = std::chrono::steady_clock::now();
      filter.predict(dt);
      filter.update(y);
      const auto t1 = std::chrono::steady_clock::now();
      out.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
  }

  BenchReport r;
  r.conv_method = conv_method;
  r.ukf = summarize(ukf_ms);
  r.conv = summarize(conv_ms);
  r.ratio = r.ukf.mean_ms > 0.0 ? r.conv.mean_ms / r.ukf.mean_ms : 0.0;
  return r;
}

}  // namespace convtrack
