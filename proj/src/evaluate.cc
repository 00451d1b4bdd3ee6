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

#include "wsoleval/evaluate.h"

#include <json.hpp>

#include "wsoleval/errors.h"
#include "wsoleval/parallel.h"

namespace wsoleval {
namespace fs = std::filesystem;

namespace {

ScoreMap load_prepared(const fs::path& dir, const ManifestEntry& entry,
                       const EvalConfig& config) {
  const std::optional<fs::path> path = resolve_scoremap(dir, entry.image_id);
  if (!path) {
    throw InvalidInput("no score map for image '" + entry.image_id + "' in " +
                       dir.string() + " (tried .wsm, .png, .pgm)");
  }
  const ScoreMap raw = config.strict_size
                           ? load_scoremap(*path, entry.height, entry.width)
                           : read_scoremap(*path);
  return prepare_scoremap(raw, entry.height, entry.width, config.normalization,
                          config.resize_order);
}

template <typename Record, typename Build>
std::vector<Record> load_records(const SplitManifest& manifest,
                                 const EvalConfig& config, Build build) {
  if (manifest.entries.empty()) throw InvalidInput("manifest has no entries");
  std::vector<std::optional<Record>> slots(manifest.entries.size());
  parallel_for(slots.size(), config.threads,
               [&](std::size_t i) { slots[i] = build(manifest.entries[i]); });
  std::vector<Record> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

nlohmann::json config_to_json(const EvalConfig& c, Metric metric) {
  nlohmann::json j;
  if (c.exact_thresholds) {
    j["thresholds"] = "exact";
  } else {
    j["thresholds"] = "grid";
    j["grid_spacing"] = c.grid_spacing;
  }
  j["normalization"] = to_string(c.normalization);
  j["resize_order"] = to_string(c.resize_order);
  j["strict_size"] = c.strict_size;
  if (metric != Metric::kPxAP) {
    j["connectivity"] = static_cast<int>(c.connectivity);
    j["deltas"] = effective_deltas(metric, c);
    j["tau_selection"] =
        c.tau_selection == TauSelection::kPerDelta ? "per-delta" : "shared";
  }
  return j;
}

}  // namespace

Metric metric_from_string(const std::string& name) {
  if (name == "maxboxacc") return Metric::kMaxBoxAcc;
  if (name == "maxboxaccv2") return Metric::kMaxBoxAccV2;
  if (name == "pxap") return Metric::kPxAP;
  throw InvalidInput("unknown metric '" + name +
                     "' (expected maxboxacc, maxboxaccv2 or pxap)");
}

std::string to_string(Metric metric) {
  switch (metric) {
    case Metric::kMaxBoxAcc:
      return "maxboxacc";
    case Metric::kMaxBoxAccV2:
      return "maxboxaccv2";
    case Metric::kPxAP:
      return "pxap";
  }
  return "?";
}

std::vector<double> effective_deltas(Metric metric, const EvalConfig& config) {
  if (!config.deltas.empty()) return config.deltas;
  if (metric == Metric::kMaxBoxAccV2) {
    return {kV2IouThresholds.begin(), kV2IouThresholds.end()};
  }
  return {kDefaultIouThreshold};
}

std::vector<BoxEvalRecord> load_box_records(const SplitManifest& manifest,
                                            const fs::path& scoremap_dir,
                                            const EvalConfig& config) {
  return load_records<BoxEvalRecord>(
      manifest, config, [&](const ManifestEntry& e) {
        const auto* ann = std::get_if<BoxAnnotation>(&e.annotation);
        if (ann == nullptr) {
          throw InvalidInput("box metrics need box annotations, but '" +
                             e.image_id + "' has a mask");
        }
        return BoxEvalRecord{e.image_id, load_prepared(scoremap_dir, e, config),
                             ann->boxes};
      });
}

std::vector<MaskEvalRecord> load_mask_records(const SplitManifest& manifest,
                                              const fs::path& scoremap_dir,
                                              const EvalConfig& config) {
  return load_records<MaskEvalRecord>(
      manifest, config, [&](const ManifestEntry& e) {
        const auto* ann = std::get_if<MaskAnnotation>(&e.annotation);
        if (ann == nullptr) {
          throw InvalidInput("pxap needs mask annotations, but '" + e.image_id +
                             "' has boxes");
        }
        return MaskEvalRecord{e.image_id,
                              load_prepared(scoremap_dir, e, config), ann->mask,
                              ann->ignore};
      });
}

ThresholdGrid make_grid(const EvalConfig& config,
                        std::span<const ScoreMap* const> maps) {
  if (config.exact_thresholds) return ThresholdGrid::exact(maps);
  return ThresholdGrid::uniform(config.grid_spacing);
}

EvalReport evaluate_boxes(std::span<const BoxEvalRecord> records, Metric metric,
                          const EvalConfig& config) {
  if (records.empty()) throw InvalidInput("no records to evaluate");
  std::vector<const ScoreMap*> maps;
  for (const BoxEvalRecord& r : records) maps.push_back(&r.score_map);
  const ThresholdGrid grid = make_grid(config, maps);
  const std::vector<double> deltas = effective_deltas(metric, config);
  const BoxAccOptions options{config.connectivity, config.threads};

  EvalReport report{metric,      0.0,
                    {},          static_cast<std::int64_t>(records.size()),
                    config,      std::nullopt,
                    std::nullopt};
  if (metric == Metric::kMaxBoxAcc) {
    BoxAccCurve curve = box_acc(records, grid, deltas, options);
    for (double d : deltas) report.per_delta.push_back(max_box_acc(curve, d));
    report.value = report.per_delta.front().value;
    report.box_curve = std::move(curve);
  } else if (metric == Metric::kMaxBoxAccV2) {
    BoxAccCurve curve = box_acc_v2(records, grid, deltas, options);
    MaxBoxAccV2Result r = max_box_acc_v2(curve, deltas, config.tau_selection);
    report.value = r.value;
    report.per_delta = std::move(r.per_delta);
    report.box_curve = std::move(curve);
  } else {
    throw InvalidInput("pxap needs mask records");
  }
  return report;
}

EvalReport evaluate_masks(std::span<const MaskEvalRecord> records,
                          const EvalConfig& config) {
  if (records.empty()) throw InvalidInput("no records to evaluate");
  const ThresholdGrid grid = config.exact_thresholds
                                 ? exact_mask_thresholds(records)
                                 : ThresholdGrid::uniform(config.grid_spacing);
  PrCurve curve = px_pr_curve(records, grid, PrOptions{config.threads});
  EvalReport report{Metric::kPxAP,
                    curve.ap,
                    {},
                    static_cast<std::int64_t>(records.size()),
                    config,
                    std::nullopt,
                    std::move(curve)};
  return report;
}

EvalReport evaluate(const SplitManifest& manifest, const fs::path& scoremap_dir,
                    Metric metric, const EvalConfig& config) {
  if (metric == Metric::kPxAP) {
    return evaluate_masks(load_mask_records(manifest, scoremap_dir, config),
                          config);
  }
  return evaluate_boxes(load_box_records(manifest, scoremap_dir, config),
                        metric, config);
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["metric"] = to_string(report.metric);
  j["value"] = report.value;
  j["n_images"] = report.n_images;
  if (report.metric != Metric::kPxAP) {
    nlohmann::json points = nlohmann::json::array();
    for (const OperatingPoint& p : report.per_delta) {
      points.push_back(
          {{"delta", p.delta}, {"max_box_acc", p.value}, {"tau_star", p.tau}});
    }
    j["per_delta"] = points;
  }
  j["config"] = config_to_json(report.config, report.metric);
  return j.dump(2);
}

void write_curve_csv(std::ostream& os, const EvalReport& report) {
  if (report.box_curve) {
    write_box_acc_csv(os, *report.box_curve);
  } else if (report.pr_curve) {
    write_pr_csv(os, *report.pr_curve);
  }
}

}  // namespace wsoleval
