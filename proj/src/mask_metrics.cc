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

#include "wsoleval/mask_metrics.h"

#include <cstdio>

#include "wsoleval/errors.h"
#include "wsoleval/parallel.h"

namespace wsoleval {

void MaskEvalRecord::validate() const {
  const int h = score_map.height();
  const int w = score_map.width();
  auto same = [&](const BinaryMask& m) {
    return m.height() == h && m.width() == w;
  };
  if (!same(gt_mask) || (ignore_mask && !same(*ignore_mask))) {
    throw InvalidInput("record '" + image_id +
                       "': score map and masks differ in size");
  }
  if (ignore_mask) {
    for (std::size_t i = 0; i < gt_mask.size(); ++i) {
      if (gt_mask.values()[i] && ignore_mask->values()[i]) {
        throw InvalidInput("record '" + image_id +
                           "': a pixel is both foreground and ignored");
      }
    }
  }
}

PixelSet apply_ignore(const MaskEvalRecord& record) {
  record.validate();
  PixelSet out;
  out.scores.reserve(record.score_map.size());
  out.labels.reserve(record.score_map.size());
  for (std::size_t i = 0; i < record.score_map.size(); ++i) {
    if (record.ignore_mask && record.ignore_mask->values()[i]) continue;
    out.scores.push_back(record.score_map.values()[i]);
    out.labels.push_back(record.gt_mask.values()[i]);
  }
  return out;
}

PixelCounts& PixelCounts::operator+=(const PixelCounts& other) {
  for (std::size_t t = 0; t < true_positive.size(); ++t) {
    true_positive[t] += other.true_positive[t];
    predicted[t] += other.predicted[t];
  }
  foreground += other.foreground;
  total += other.total;
  return *this;
}

PixelCounts count_pixels(const PixelSet& pixels, const ThresholdGrid& grid) {
  // Histogram each pixel at the last threshold it passes, then take suffix
  // sums so bin t counts every pixel with score >= tau_t.
  const std::size_t n = grid.size();
  PixelCounts counts(n);
  for (std::size_t i = 0; i < pixels.scores.size(); ++i) {
    const bool fg = pixels.labels[i] != 0;
    counts.foreground += fg ? 1 : 0;
    ++counts.total;
    const std::ptrdiff_t bin = grid.last_at_or_below(pixels.scores[i]);
    if (bin < 0) continue;
    ++counts.predicted[bin];
    if (fg) ++counts.true_positive[bin];
  }
  for (std::size_t t = n; t-- > 1;) {
    counts.predicted[t - 1] += counts.predicted[t];
    counts.true_positive[t - 1] += counts.true_positive[t];
  }
  return counts;
}

PrCurve pr_curve_from_counts(const PixelCounts& counts,
                             const ThresholdGrid& grid) {
  if (counts.foreground == 0) {
    throw InvalidInput(
        "pixel recall is undefined: no foreground pixels in the dataset");
  }
  PrCurve curve{grid, {}, {}, 0.0};
  const std::size_t n = grid.size();
  curve.precision.resize(n);
  curve.recall.resize(n);
  const double fg = static_cast<double>(counts.foreground);
  for (std::size_t t = 0; t < n; ++t) {
    const std::int64_t tp = counts.true_positive[t];
    const std::int64_t pred = counts.predicted[t];
    curve.precision[t] =
        pred == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(pred);
    curve.recall[t] = static_cast<double>(tp) / fg;
  }
  curve.ap = px_ap(curve);
  return curve;
}

ThresholdGrid exact_mask_thresholds(std::span<const MaskEvalRecord> records) {
  std::vector<double> values;
  for (const MaskEvalRecord& r : records) {
    const PixelSet kept = apply_ignore(r);
    values.insert(values.end(), kept.scores.begin(), kept.scores.end());
  }
  return ThresholdGrid::exact_from_values(std::move(values));
}

PrCurve px_pr_curve(std::span<const MaskEvalRecord> records,
                    const ThresholdGrid& grid, const PrOptions& options) {
  if (records.empty()) {
    throw InvalidInput("pixel metrics are undefined for an empty record list");
  }
  for (const MaskEvalRecord& r : records) {
    r.validate();
    if (!r.score_map.is_calibrated()) {
      throw PreconditionViolation("score map for '" + r.image_id +
                                  "' is not calibrated to [0, 1]");
    }
  }
  std::vector<PixelCounts> per_record(records.size());
  parallel_for(records.size(), options.threads, [&](std::size_t i) {
    per_record[i] = count_pixels(apply_ignore(records[i]), grid);
  });
  PixelCounts pooled(grid.size());
  for (const PixelCounts& c : per_record) pooled += c;
  return pr_curve_from_counts(pooled, grid);
}

double px_ap(const PrCurve& curve) {
  double ap = 0.0;
  double previous_recall = 0.0;
  for (std::size_t t = curve.recall.size(); t-- > 0;) {
    ap += curve.precision[t] * (curve.recall[t] - previous_recall);
    previous_recall = curve.recall[t];
  }
  return ap;
}

void write_pr_csv(std::ostream& os, const PrCurve& curve) {
  os << "tau,precision,recall\n";
  char line[96];
  for (std::size_t t = curve.thresholds.size(); t-- > 0;) {
    std::snprintf(line, sizeof(line), "%.6f,%.6f,%.6f\n", curve.thresholds[t],
                  curve.precision[t], curve.recall[t]);
    os << line;
  }
  std::snprintf(line, sizeof(line), "#pxap,%.6f\n", curve.ap);
  os << line;
}

}  // namespace wsoleval
