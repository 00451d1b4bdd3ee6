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

#ifndef WSOLEVAL_MASK_METRICS_H_
#define WSOLEVAL_MASK_METRICS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "wsoleval/geometry.h"
#include "wsoleval/scoremap_ops.h"

namespace wsoleval {

struct MaskEvalRecord {
  std::string image_id;
  ScoreMap score_map;
  BinaryMask gt_mask;
  std::optional<BinaryMask> ignore_mask;  // 1 = excluded from every count

  // Throws InvalidInput on mismatched dimensions or on a pixel that is both
  // foreground and ignored.
  void validate() const;
};

// The pixels of a record that take part in evaluation.
struct PixelSet {
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
};

PixelSet apply_ignore(const MaskEvalRecord& record);

// Pixel counts per threshold, pooled over any number of records. Merging is
// plain addition, so pooled results do not depend on evaluation order.
struct PixelCounts {
  std::vector<std::int64_t> true_positive;  // |{s >= tau} & {T = 1}|
  std::vector<std::int64_t> predicted;      // |{s >= tau}|
  std::int64_t foreground = 0;              // |{T = 1}|
  std::int64_t total = 0;

  explicit PixelCounts(std::size_t n_thresholds = 0)
      : true_positive(n_thresholds, 0), predicted(n_thresholds, 0) {}
  PixelCounts& operator+=(const PixelCounts& other);
};

PixelCounts count_pixels(const PixelSet& pixels, const ThresholdGrid& grid);

struct PrCurve {
  ThresholdGrid thresholds;
  std::vector<double> precision;  // indexed like thresholds (ascending tau)
  std::vector<double> recall;
  double ap = 0.0;
};

struct PrOptions {
  int threads = 1;
};

// Dataset-level precision and recall: counts are pooled over all non-ignored
// pixels of all records before dividing. Precision with nothing predicted is
// 1. Throws InvalidInput on an empty record list or a dataset without
// foreground pixels.
// EXACT-mode thresholds for pixel metrics: the distinct scores of every
// non-ignored pixel, so ignored pixels cannot add curve points.
ThresholdGrid exact_mask_thresholds(std::span<const MaskEvalRecord> records);

PrCurve px_pr_curve(std::span<const MaskEvalRecord> records,
                    const ThresholdGrid& grid, const PrOptions& options = {});

PrCurve pr_curve_from_counts(const PixelCounts& counts,
                             const ThresholdGrid& grid);

// sum_l Prec(tau_l) * (Rec(tau_l) - Rec(tau_{l-1})), visiting thresholds in
// descending order so recall grows from 0.
double px_ap(const PrCurve& curve);

// CSV with header `tau,precision,recall`, descending tau, 6 decimals, and a
// closing `#pxap,<value>` line.
void write_pr_csv(std::ostream& os, const PrCurve& curve);

}  // namespace wsoleval

#endif  // WSOLEVAL_MASK_METRICS_H_
