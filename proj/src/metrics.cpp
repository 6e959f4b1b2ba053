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

#include "convtrack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "convtrack/errors.hpp"

namespace convtrack {

namespace {

struct GtHistory
{
  int last_hyp = -1;          // last hypothesis id ever matched
  bool tracked_last = false;  // matched at the last frame the object was present
  bool ever_tracked = false;
  int present = 0;
  int matched = 0;
};

double safe_div(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

double ClearMot::mota() const
{
  return total_gt > 0 ? 1.0 - static_cast<double>(fp + fn + ids) / total_gt : 0.0;
}
double ClearMot::motp() const { return safe_div(iou_sum, tp); }
double ClearMot::mt() const { return safe_div(mostly_tracked, gt_tracks); }
double ClearMot::ml() const { return safe_div(mostly_lost, gt_tracks); }
double ClearMot::recall() const { return safe_div(tp, total_gt); }
double ClearMot::position_rmse() const { return std::sqrt(safe_div(sq_center_error_sum, tp)); }

ClearMot clear_mot(
  std::span<const GtFrame> gt, std::span<const HypFrame> hyp, double iou_match, double min_score)
{
  if (gt.size() != hyp.size()) {
    throw InputError(
      "ground truth has " + std::to_string(gt.size()) + " frames but hypotheses have " +
      std::to_string(hyp.size()));
  }
  ClearMot acc;
  std::map<int, GtHistory> history;
  std::map<int, int> previous;  // gt id -> hyp id matched in the previous frame

  for (std::size_t f = 0; f < gt.size(); ++f) {
    if (gt[f].frame != hyp[f].frame) {
      throw InputError("frame index mismatch at position " + std::to_string(f));
    }
    const auto & gts = gt[f].objects;
    std::vector<const HypObject *> hyps;
    for (const HypObject & h : hyp[f].objects) {
      if (h.score >= min_score) {
        hyps.push_back(&h);
      }
    }

    const auto ng = static_cast<Eigen::Index>(gts.size());
    const auto nh = static_cast<Eigen::Index>(hyps.size());
    Eigen::MatrixXd iou(ng, nh);
    for (Eigen::Index i = 0; i < ng; ++i) {
      for (Eigen::Index j = 0; j < nh; ++j) {
        iou(i, j) = iou_3d(gts[i].box, hyps[j]->box);
      }
    }

    std::vector<int> gt_to_hyp(gts.size(), -1);
    std::vector<char> hyp_used(hyps.size(), 0);

    // continuation of last frame's correspondences
    for (Eigen::Index i = 0; i < ng; ++i) {
      const auto it = previous.find(gts[i].id);
      if (it == previous.end()) {
        continue;
      }
      for (Eigen::Index j = 0; j < nh; ++j) {
        if (!hyp_used[j] && hyps[j]->id == it->second && iou(i, j) >= iou_match) {
          gt_to_hyp[i] = static_cast<int>(j);
          hyp_used[j] = 1;
          break;
        }
      }
    }

    // Hungarian on whatever is left
    std::vector<int> free_gt;
    std::vector<int> free_hyp;
    for (Eigen::Index i = 0; i < ng; ++i) {
      if (gt_to_hyp[i] < 0) {
        free_gt.push_back(static_cast<int>(i));
      }
    }
    for (Eigen::Index j = 0; j < nh; ++j) {
      if (!hyp_used[j]) {
        free_hyp.push_back(static_cast<int>(j));
      }
    }
    if (!free_gt.empty() && !free_hyp.empty()) {
      Eigen::MatrixXd cost(
        static_cast<Eigen::Index>(free_gt.size()), static_cast<Eigen::Index>(free_hyp.size()));
      for (std::size_t a = 0; a < free_gt.size(); ++a) {
        for (std::size_t b = 0; b < free_hyp.size(); ++b) {
          const double v = iou(free_gt[a], free_hyp[b]);
          cost(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
            v >= iou_match ? 1.0 - v : kPaddingCost;
        }
      }
      for (const auto & [a, b] : hungarian_assign(cost)) {
        const int i = free_gt[a];
        const int j = free_hyp[b];
        if (iou(i, j) >= iou_match) {
          gt_to_hyp[i] = j;
          hyp_used[j] = 1;
        }
      }
    }

    std::map<int, int> current;
    for (Eigen::Index i = 0; i < ng; ++i) {
      GtHistory & h = history[gts[i].id];
      ++h.present;
      ++acc.total_gt;
      const int j = gt_to_hyp[i];
      if (j < 0) {
        ++acc.fn;
        h.tracked_last = false;
        continue;
      }
      const HypObject & match = *hyps[j];
      ++acc.tp;
      ++h.matched;
      acc.iou_sum += iou(i, j);
      const double dx = gts[i].box.cx - match.box.cx;
      const double dy = gts[i].box.cy - match.box.cy;
      const double dz = gts[i].box.cz - match.box.cz;
      acc.sq_center_error_sum += dx * dx + dy * dy + dz * dz;
      acc.matched_scores.push_back(match.score);
      if (h.last_hyp >= 0 && h.last_hyp != match.id) {
        ++acc.ids;
      }
      if (h.ever_tracked && !h.tracked_last) {
        ++acc.frag;
      }
      h.last_hyp = match.id;
      h.tracked_last = true;
      h.ever_tracked = true;
      current[gts[i].id] = match.id;
    }
    for (Eigen::Index j = 0; j < nh; ++j) {
      if (!hyp_used[j]) {
        ++acc.fp;
      }
    }
    previous = std::move(current);
  }

  acc.gt_tracks = static_cast<int>(history.size());
  for (const auto & entry : history) {
    const double ratio = safe_div(entry.second.matched, entry.second.present);
    if (ratio >= 0.8) {
      ++acc.mostly_tracked;
    } else if (ratio <= 0.2) {
      ++acc.mostly_lost;
    }
  }
  return acc;
}

SweepResult amota_sweep(
  std::span<const GtFrame> gt, std::span<const HypFrame> hyp, int levels, double iou_match)
{
  if (levels < 1) {
    throw InputError("recall levels must be positive");
  }
  SweepResult result;
  const ClearMot full = clear_mot(gt, hyp, iou_match);
  std::vector<double> scores = full.matched_scores;
  std::sort(scores.begin(), scores.end(), std::greater<>());
  if (scores.size() > 1 && scores.front() == scores.back()) {
    result.degenerate_scores = true;
  }

  const double total = full.total_gt;
  for (int k = 1; k <= levels; ++k) {
    OperatingPoint op;
    op.recall_level = static_cast<double>(k) / levels;
    const auto needed = static_cast<std::size_t>(std::ceil(op.recall_level * total - 1e-9));
    if (total > 0 && needed >= 1 && needed <= scores.size()) {
      op.reached = true;
      op.threshold = scores[needed - 1];
      const ClearMot at = clear_mot(gt, hyp, iou_match, op.threshold);
      const double errors = at.fp + at.fn + at.ids;
      op.mota = at.mota();
      op.smota = std::clamp(
        1.0 - (errors - (1.0 - op.recall_level) * total) / (op.recall_level * total), 0.0, 1.0);
      op.motp = at.motp();
    }
    result.samota += op.smota;
    result.amota += op.mota;
    result.amotp += op.motp;
    result.points.push_back(op);
  }
  result.samota /= levels;
  result.amota /= levels;
  result.amotp /= levels;
  return result;
}

MetricsReport evaluate(
  std::span<const GtFrame> gt, std::span<const HypFrame> hyp, int levels, double iou_match)
{
  const ClearMot cm = clear_mot(gt, hyp, iou_match);
  const SweepResult sweep = amota_sweep(gt, hyp, levels, iou_match);
  MetricsReport r;
  r.samota = 100.0 * sweep.samota;
  r.amota = 100.0 * sweep.amota;
  r.amotp = 100.0 * sweep.amotp;
  r.mota = 100.0 * cm.mota();
  r.motp = 100.0 * cm.motp();
  r.mt = 100.0 * cm.mt();
  r.ml = 100.0 * cm.ml();
  r.ids = cm.ids;
  r.frag = cm.frag;
  r.fp = cm.fp;
  r.fn = cm.fn;
  r.position_rmse = cm.position_rmse();
  return r;
}

std::string metrics_csv_header()
{
  return "method,scenario,rho_c,seed,samota,amota,amotp,mota,motp,mt,ml,ids,frag,fp,fn,"
         "position_rmse";
}

std::string metrics_csv_row(
  const std::string & method, const std::string & scenario, double rho_c, long long seed,
  const MetricsReport & r)
{
  char buf[512];
  std::snprintf(
    buf, sizeof(buf), "%s,%s,%.4f,%lld,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%d,%d,%d,%d,%.6f",
    method.c_str(), scenario.c_str(), rho_c, seed, r.samota, r.amota, r.amotp, r.mota, r.motp,
    r.mt, r.ml, r.ids, r.frag, r.fp, r.fn, r.position_rmse);
  return buf;
}

std::string metrics_table(const MetricsReport & r)
{
  std::ostringstream os;
  char buf[256];
  std::snprintf(
    buf, sizeof(buf), "%-8s %-8s %-8s %-8s %-8s %-8s %-8s %-6s %-6s %-6s %-6s\n", "sAMOTA%",
    "AMOTA%", "AMOTP%", "MOTA%", "MOTP%", "MT%", "ML%", "IDS", "FRAG", "FP", "FN");
  os << buf;
  std::snprintf(
    buf, sizeof(buf), "%-8.2f %-8.2f %-8.2f %-8.2f %-8.2f %-8.2f %-8.2f %-6d %-6d %-6d %-6d\n",
    r.samota, r.amota, r.amotp, r.mota, r.motp, r.mt, r.ml, r.ids, r.frag, r.fp, r.fn);
  os << buf;
  return os.str();
}

}  // namespace convtrack
