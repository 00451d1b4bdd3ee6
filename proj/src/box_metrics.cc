/* Copyright 2026 The wsoleval Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "wsoleval/box_metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "wsoleval/errors.h"
#include "wsoleval/parallel.h"

namespace wsoleval {
namespace {

constexpr double kDeltaMatchTolerance = 1e-12;

std::vector<double> sorted_deltas(std::span<const double> deltas) {
  if (deltas.empty()) throw InvalidInput("at least one IoU threshold needed");
  std::vector<double> out(deltas.begin(), deltas.end());
  for (double d : out) {
    if (!(d > 0.0 && d <= 1.0)) {
      throw InvalidInput("IoU threshold must lie in (0, 1], got " +
                         std::to_string(d));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double best_iou(std::span<const ComponentBox> predicted,
                std::span<const BoundingBox> gt) {
  double best = -1.0;
  for (const ComponentBox& p : predicted) {
    for (const BoundingBox& g : gt) best = std::max(best, iou(p.box, g));
  }
  return best;
}

BoxAccCurve accumulate(std::span<const BoxEvalRecord> records,
                       const ThresholdGrid& grid,
                       std::span<const double> deltas, BoxSelection selection,
                       const BoxAccOptions& options) {
  if (records.empty()) {
    throw InvalidInput("box accuracy is undefined for an empty record list");
  }
  for (const BoxEvalRecord& r : records) {
    r.validate();
    if (!r.score_map.is_calibrated()) {
      throw PreconditionViolation("score map for '" + r.image_id +
                                  "' is not calibrated to [0, 1]");
    }
  }
  BoxAccCurve curve{sorted_deltas(deltas), grid, {}, 0};
  curve.n_images = static_cast<std::int64_t>(records.size());

  std::vector<std::vector<double>> ious(records.size());
  parallel_for(records.size(), options.threads, [&](std::size_t i) {
    ious[i] = best_iou_per_threshold(records[i], grid, selection,
                                     options.connectivity);
  });

  curve.correct.assign(curve.deltas.size(),
                       std::vector<std::int64_t>(grid.size(), 0));
  for (std::size_t d = 0; d < curve.deltas.size(); ++d) {
    const double delta = curve.deltas[d];
    for (const std::vector<double>& image : ious) {
      for (std::size_t t = 0; t < grid.size(); ++t) {
        if (image[t] >= delta) ++curve.correct[d][t];
      }
    }
  }
  return curve;
}

OperatingPoint point_at(const BoxAccCurve& curve, std::size_t d,
                        std::size_t t) {
  return {curve.deltas[d], curve.acc(d, t), curve.thresholds[t], t};
}

}  // namespace

void BoxEvalRecord::validate() const {
  if (gt_boxes.empty()) {
    throw InvalidInput("record '" + image_id + "' has no ground-truth boxes");
  }
  for (const BoundingBox& b : gt_boxes) {
    if (!b.fits(score_map.height(), score_map.width())) {
      throw InvalidInput("record '" + image_id + "': box " + b.to_string() +
                         " exceeds the " + std::to_string(score_map.width()) +
                         "x" + std::to_string(score_map.height()) + " frame");
    }
  }
}

std::size_t BoxAccCurve::delta_index(double delta) const {
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (std::abs(deltas[i] - delta) <= kDeltaMatchTolerance) return i;
  }
  throw InvalidInput("IoU threshold " + std::to_string(delta) +
                     " is not part of the curve");
}

std::vector<double> best_iou_per_threshold(const BoxEvalRecord& record,
                                           const ThresholdGrid& grid,
                                           BoxSelection selection,
                                           Connectivity connectivity) {
  const ScoreMap& s = record.score_map;
  std::vector<double> sorted(s.values());
  std::sort(sorted.begin(), sorted.end());

  std::vector<double> out(grid.size(), -1.0);
  std::ptrdiff_t previous_count = -1;
  for (std::size_t t = 0; t < grid.size(); ++t) {
    // The super-level set only changes when tau passes a pixel value, so
    // thresholds selecting the same pixel count share one result.
    const std::ptrdiff_t count =
        sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), grid[t]);
    if (count == previous_count) {
      out[t] = out[t - 1];
      continue;
    }
    previous_count = count;
    if (count == 0) continue;

    const ComponentSet components =
        connected_components(threshold(s, grid[t]), connectivity);
    const std::vector<ComponentBox> boxes = component_boxes(components);
    std::span<const ComponentBox> candidates(boxes);
    if (selection == BoxSelection::kLargestComponent) {
      candidates = candidates.first(1);
    }
    out[t] = best_iou(candidates, record.gt_boxes);
  }
  return out;
}

BoxAccCurve box_acc(std::span<const BoxEvalRecord> records,
                    const ThresholdGrid& grid, std::span<const double> deltas,
                    const BoxAccOptions& options) {
  return accumulate(records, grid, deltas, BoxSelection::kLargestComponent,
                    options);
}

BoxAccCurve box_acc(std::span<const BoxEvalRecord> records,
                    const ThresholdGrid& grid, double delta,
                    const BoxAccOptions& options) {
  return box_acc(records, grid, std::span<const double>(&delta, 1), options);
}

BoxAccCurve box_acc_v2(std::span<const BoxEvalRecord> records,
                       const ThresholdGrid& grid,
                       std::span<const double> deltas,
                       const BoxAccOptions& options) {
  return accumulate(records, grid, deltas, BoxSelection::kAllComponents,
                    options);
}

OperatingPoint max_box_acc(const BoxAccCurve& curve, double delta) {
  const std::size_t d = curve.delta_index(delta);
  const std::vector<std::int64_t>& row = curve.correct[d];
  // max_element returns the first maximum, i.e. the smallest tau.
  const auto best = std::max_element(row.begin(), row.end());
  return point_at(curve, d, static_cast<std::size_t>(best - row.begin()));
}

MaxBoxAccV2Result max_box_acc_v2(const BoxAccCurve& curve,
                                 std::span<const double> deltas,
                                 TauSelection selection) {
  if (deltas.empty()) throw InvalidInput("at least one IoU threshold needed");
  std::vector<std::size_t> rows;
  for (double delta : deltas) rows.push_back(curve.delta_index(delta));

  MaxBoxAccV2Result result{0.0, {}};
  if (selection == TauSelection::kPerDelta) {
    double sum = 0.0;
    for (double delta : deltas) {
      result.per_delta.push_back(max_box_acc(curve, delta));
      sum += result.per_delta.back().value;
    }
    result.value = sum / static_cast<double>(deltas.size());
    return result;
  }

  // Shared tau: integer sums keep the comparison exact.
  std::size_t best_t = 0;
  std::int64_t best_sum = -1;
  for (std::size_t t = 0; t < curve.thresholds.size(); ++t) {
    std::int64_t sum = 0;
    for (std::size_t d : rows) sum += curve.correct[d][t];
    if (sum > best_sum) {
      best_sum = sum;
      best_t = t;
    }
  }
  double sum = 0.0;
  for (std::size_t d : rows) {
    result.per_delta.push_back(point_at(curve, d, best_t));
    sum += result.per_delta.back().value;
  }
  result.value = sum / static_cast<double>(deltas.size());
  return result;
}

void write_box_acc_csv(std::ostream& os, const BoxAccCurve& curve) {
  os << "delta,tau,acc\n";
  char line[96];
  for (std::size_t d = 0; d < curve.deltas.size(); ++d) {
    for (std::size_t t = 0; t < curve.thresholds.size(); ++t) {
      std::snprintf(line, sizeof(line), "%.6f,%.6f,%.6f\n", curve.deltas[d],
                    curve.thresholds[t], curve.acc(d, t));
      os << line;
    }
  }
}

}  // namespace wsoleval
