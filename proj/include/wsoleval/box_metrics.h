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

#ifndef WSOLEVAL_BOX_METRICS_H_
#define WSOLEVAL_BOX_METRICS_H_

#include <array>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "wsoleval/geometry.h"
#include "wsoleval/scoremap_ops.h"

namespace wsoleval {

inline constexpr double kDefaultIouThreshold = 0.5;
inline constexpr std::array<double, 3> kV2IouThresholds = {0.3, 0.5, 0.7};

// One image for box evaluation: a calibrated score map at ground-truth
// resolution and the non-empty list of ground-truth boxes in that frame.
struct BoxEvalRecord {
  std::string image_id;
  ScoreMap score_map;
  std::vector<BoundingBox> gt_boxes;

  // Throws InvalidInput if gt_boxes is empty or a box leaves the frame.
  void validate() const;
};

// How predicted boxes are formed from a thresholded map.
enum class BoxSelection {
  kLargestComponent,  // tight box of the largest-area component (MaxBoxAcc)
  kAllComponents,     // tight boxes of every component (MaxBoxAccV2)
};

struct BoxAccOptions {
  Connectivity connectivity = Connectivity::kEight;
  int threads = 1;
};

// Correct-image counts per (IoU threshold, score threshold). acc() is
// correct / n_images, so every entry is an exact multiple of 1/n_images.
struct BoxAccCurve {
  std::vector<double> deltas;
  ThresholdGrid thresholds;
  std::vector<std::vector<std::int64_t>> correct;  // [delta][tau]
  std::int64_t n_images = 0;

  double acc(std::size_t delta_index, std::size_t tau_index) const {
    return static_cast<double>(correct[delta_index][tau_index]) /
           static_cast<double>(n_images);
  }
  // Throws InvalidInput when delta is not part of the curve.
  std::size_t delta_index(double delta) const;
};

// Best IoU between predicted and ground-truth boxes at every threshold of
// the grid, or -1 where the thresholded mask is empty.
std::vector<double> best_iou_per_threshold(const BoxEvalRecord& record,
                                           const ThresholdGrid& grid,
                                           BoxSelection selection,
                                           Connectivity connectivity);

BoxAccCurve box_acc(std::span<const BoxEvalRecord> records,
                    const ThresholdGrid& grid, std::span<const double> deltas,
                    const BoxAccOptions& options = {});
BoxAccCurve box_acc(std::span<const BoxEvalRecord> records,
                    const ThresholdGrid& grid,
                    double delta = kDefaultIouThreshold,
                    const BoxAccOptions& options = {});

BoxAccCurve box_acc_v2(std::span<const BoxEvalRecord> records,
                       const ThresholdGrid& grid,
                       std::span<const double> deltas = kV2IouThresholds,
                       const BoxAccOptions& options = {});

struct OperatingPoint {
  double delta;
  double value;
  double tau;
  std::size_t tau_index;
};

// max over tau of acc[delta][tau]; ties go to the smallest tau.
OperatingPoint max_box_acc(const BoxAccCurve& curve,
                           double delta = kDefaultIouThreshold);

enum class TauSelection {
  kPerDelta,  // each delta picks its own tau (the metric's definition)
  kShared,    // one tau maximizing the delta-average; sensitivity studies
};

struct MaxBoxAccV2Result {
  double value;
  std::vector<OperatingPoint> per_delta;
};

MaxBoxAccV2Result max_box_acc_v2(
    const BoxAccCurve& curve, std::span<const double> deltas = kV2IouThresholds,
    TauSelection selection = TauSelection::kPerDelta);

// CSV with header `delta,tau,acc`, ascending (delta, tau), 6 decimals.
void write_box_acc_csv(std::ostream& os, const BoxAccCurve& curve);

}  // namespace wsoleval

#endif  // WSOLEVAL_BOX_METRICS_H_
