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

#ifndef WSOLEVAL_EVALUATE_H_
#define WSOLEVAL_EVALUATE_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wsoleval/box_metrics.h"
#include "wsoleval/dataset_io.h"
#include "wsoleval/mask_metrics.h"
#include "wsoleval/scoremap_ops.h"

namespace wsoleval {

enum class Metric { kMaxBoxAcc, kMaxBoxAccV2, kPxAP };

Metric metric_from_string(const std::string& name);
std::string to_string(Metric metric);

struct EvalConfig {
  // Empty means the metric default: {0.5} for MaxBoxAcc, {0.3, 0.5, 0.7}
  // for MaxBoxAccV2.
  std::vector<double> deltas;
  double grid_spacing = ThresholdGrid::kDefaultSpacing;
  bool exact_thresholds = false;
  Connectivity connectivity = Connectivity::kEight;
  Normalization normalization = Normalization::kMinMax;
  ResizeOrder resize_order = ResizeOrder::kCalibrateFirst;
  TauSelection tau_selection = TauSelection::kPerDelta;
  // Reject score maps whose size differs from the manifest instead of
  // resampling them.
  bool strict_size = false;
  int threads = 1;
};

std::vector<double> effective_deltas(Metric metric, const EvalConfig& config);

// Loads and calibrates every entry's score map from scoremap_dir. Throws
// InvalidInput when the manifest holds the wrong annotation kind or a score
// map is missing.
std::vector<BoxEvalRecord> load_box_records(
    const SplitManifest& manifest, const std::filesystem::path& scoremap_dir,
    const EvalConfig& config);
std::vector<MaskEvalRecord> load_mask_records(
    const SplitManifest& manifest, const std::filesystem::path& scoremap_dir,
    const EvalConfig& config);

ThresholdGrid make_grid(const EvalConfig& config,
                        std::span<const ScoreMap* const> maps);

struct EvalReport {
  Metric metric;
  double value;
  std::vector<OperatingPoint> per_delta;  // box metrics only
  std::int64_t n_images;
  EvalConfig config;
  // The curve behind the value, for CSV export.
  std::optional<BoxAccCurve> box_curve;
  std::optional<PrCurve> pr_curve;
};

EvalReport evaluate_boxes(std::span<const BoxEvalRecord> records, Metric metric,
                          const EvalConfig& config);
EvalReport evaluate_masks(std::span<const MaskEvalRecord> records,
                          const EvalConfig& config);
EvalReport evaluate(const SplitManifest& manifest,
                    const std::filesystem::path& scoremap_dir, Metric metric,
                    const EvalConfig& config);

// Pretty-printed JSON with the value, per-delta operating points, image
// count and the configuration that produced them.
std::string report_to_json(const EvalReport& report);

// Writes the report's curve in the box or PR CSV schema.
void write_curve_csv(std::ostream& os, const EvalReport& report);

}  // namespace wsoleval

#endif  // WSOLEVAL_EVALUATE_H_
