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

#ifndef WSOLEVAL_SCOREMAP_OPS_H_
#define WSOLEVAL_SCOREMAP_OPS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wsoleval/geometry.h"

namespace wsoleval {

enum class ThresholdMode { kGrid, kExact };

// Ascending list of score-map thresholds swept by every metric.
//
// GRID mode holds l * spacing for l = 0, 1, ... while below 1, followed by
// 1.0, so it always contains 0 and the maximum calibrated score. EXACT mode
// holds the distinct values of a set of score maps; it reproduces every
// super-level set those maps can produce, which makes metrics invariant to
// strictly increasing score transforms.
class ThresholdGrid {
 public:
  static constexpr double kDefaultSpacing = 0.001;

  static ThresholdGrid uniform(double spacing = kDefaultSpacing);
  static ThresholdGrid exact(std::span<const ScoreMap> maps);
  static ThresholdGrid exact(std::span<const ScoreMap* const> maps);
  // Distinct values of `values`; used by tests and by callers that gather
  // score values themselves.
  static ThresholdGrid exact_from_values(std::vector<double> values);

  ThresholdMode mode() const { return mode_; }
  // Spacing for GRID mode, 0 for EXACT mode.
  double spacing() const { return spacing_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  // Index of the largest threshold <= score, or -1 when score lies below
  // every threshold. A pixel with this score is foreground exactly for the
  // thresholds 0..index.
  std::ptrdiff_t last_at_or_below(double score) const;

 private:
  ThresholdGrid(ThresholdMode mode, double spacing, std::vector<double> values)
      : mode_(mode), spacing_(spacing), values_(std::move(values)) {}

  ThresholdMode mode_;
  double spacing_;
  std::vector<double> values_;
};

enum class Connectivity { kFour = 4, kEight = 8 };

Connectivity connectivity_from_int(int n);

// Foreground components of a binary mask. labels are row-major, 0 is
// background, and components are numbered 1..count in the row-major order
// of their first pixel.
struct ComponentSet {
  int height = 0;
  int width = 0;
  int count = 0;
  Connectivity connectivity = Connectivity::kEight;
  std::vector<std::int32_t> labels;

  std::int32_t label_at(int row, int col) const {
    return labels[static_cast<std::size_t>(row) * width + col];
  }
};

struct ComponentBox {
  BoundingBox box;
  std::int64_t area;  // pixel count of the component, not of the box
  std::int32_t label;
};

// (s - min) / (max - min). A constant map becomes all zeros.
ScoreMap normalize_minmax(const ScoreMap& s);

// s / max. Throws PreconditionViolation when max <= 0.
ScoreMap normalize_max(const ScoreMap& s);

// Bilinear resampling with pixel-center alignment: output pixel (r, c)
// samples the input at ((r + 0.5) * in_h / out_h - 0.5, ...), clamped to the
// input's pixel-center extent.
ScoreMap resize_bilinear(const ScoreMap& s, int out_height, int out_width);

// mask = 1 where s >= tau.
BinaryMask threshold(const ScoreMap& s, double tau);

ComponentSet connected_components(
    const BinaryMask& mask, Connectivity connectivity = Connectivity::kEight);

// Tight boxes around each component, sorted by component area descending and
// label ascending on ties.
std::vector<ComponentBox> component_boxes(const ComponentSet& components);

enum class Normalization { kMinMax, kMax, kNone };
enum class ResizeOrder { kCalibrateFirst, kResizeFirst };

Normalization normalization_from_string(const std::string& name);
std::string to_string(Normalization n);
ResizeOrder resize_order_from_string(const std::string& name);
std::string to_string(ResizeOrder order);

ScoreMap calibrate(const ScoreMap& s, Normalization normalization);

// Calibrates and resizes to (out_height, out_width) in the requested order.
// When the sizes already match no resampling happens.
ScoreMap prepare_scoremap(const ScoreMap& raw, int out_height, int out_width,
                          Normalization normalization, ResizeOrder order);

}  // namespace wsoleval

#endif  // WSOLEVAL_SCOREMAP_OPS_H_
