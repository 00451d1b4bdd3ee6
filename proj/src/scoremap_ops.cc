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

#include "wsoleval/scoremap_ops.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wsoleval/errors.h"

namespace wsoleval {

ThresholdGrid ThresholdGrid::uniform(double spacing) {
  if (!(spacing > 0.0 && spacing <= 1.0)) {
    throw InvalidInput("threshold spacing must lie in (0, 1], got " +
                       std::to_string(spacing));
  }
  std::vector<double> values;
  // Stop short of 1 by a margin so rounding in l * spacing never produces a
  // near-duplicate of the closing 1.0.
  for (std::int64_t l = 0;; ++l) {
    const double tau = static_cast<double>(l) * spacing;
    if (tau >= 1.0 - 1e-9) break;
    values.push_back(tau);
  }
  values.push_back(1.0);
  return ThresholdGrid(ThresholdMode::kGrid, spacing, std::move(values));
}

ThresholdGrid ThresholdGrid::exact_from_values(std::vector<double> values) {
  if (values.empty()) throw InvalidInput("exact thresholds need score values");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return ThresholdGrid(ThresholdMode::kExact, 0.0, std::move(values));
}

ThresholdGrid ThresholdGrid::exact(std::span<const ScoreMap> maps) {
  std::vector<double> values;
  for (const ScoreMap& m : maps) {
    values.insert(values.end(), m.values().begin(), m.values().end());
  }
  return exact_from_values(std::move(values));
}

ThresholdGrid ThresholdGrid::exact(std::span<const ScoreMap* const> maps) {
  std::vector<double> values;
  for (const ScoreMap* m : maps) {
    values.insert(values.end(), m->values().begin(), m->values().end());
  }
  return exact_from_values(std::move(values));
}

std::ptrdiff_t ThresholdGrid::last_at_or_below(double score) const {
  auto it = std::upper_bound(values_.begin(), values_.end(), score);
  return (it - values_.begin()) - 1;
}

Connectivity connectivity_from_int(int n) {
  if (n == 4) return Connectivity::kFour;
  if (n == 8) return Connectivity::kEight;
  throw InvalidInput("connectivity must be 4 or 8, got " + std::to_string(n));
}

ScoreMap normalize_minmax(const ScoreMap& s) {
  const double lo = s.min();
  const double hi = s.max();
  std::vector<double> out(s.size(), 0.0);
  if (hi > lo) {
    const double range = hi - lo;
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = (s.values()[i] - lo) / range;
    }
  }
  return ScoreMap(s.height(), s.width(), std::move(out));
}

ScoreMap normalize_max(const ScoreMap& s) {
  const double hi = s.max();
  if (!(hi > 0.0)) {
    throw PreconditionViolation(
        "max normalization needs a positive maximum score, got " +
        std::to_string(hi));
  }
  std::vector<double> out(s.values());
  for (double& v : out) v /= hi;
  return ScoreMap(s.height(), s.width(), std::move(out));
}

ScoreMap resize_bilinear(const ScoreMap& s, int out_height, int out_width) {
  if (out_height <= 0 || out_width <= 0) {
    throw InvalidInput("resize target must be positive");
  }
  if (out_height == s.height() && out_width == s.width()) return s;

  struct Tap {
    int lo, hi;
    double w;
  };
  auto taps = [](int in, int out) {
    std::vector<Tap> t(out);
    const double scale = static_cast<double>(in) / out;
    for (int d = 0; d < out; ++d) {
      double src = (d + 0.5) * scale - 0.5;
      src = std::clamp(src, 0.0, static_cast<double>(in - 1));
      const int lo = static_cast<int>(std::floor(src));
      const int hi = std::min(lo + 1, in - 1);
      t[d] = {lo, hi, src - lo};
    }
    return t;
  };
  const std::vector<Tap> rows = taps(s.height(), out_height);
  const std::vector<Tap> cols = taps(s.width(), out_width);

  std::vector<double> out(static_cast<std::size_t>(out_height) * out_width);
  for (int r = 0; r < out_height; ++r) {
    const Tap& tr = rows[r];
    for (int c = 0; c < out_width; ++c) {
      const Tap& tc = cols[c];
      const double a = s.at(tr.lo, tc.lo), b = s.at(tr.lo, tc.hi);
      const double d = s.at(tr.hi, tc.lo), e = s.at(tr.hi, tc.hi);
      const double top = a + (b - a) * tc.w;
      const double bottom = d + (e - d) * tc.w;
      double v = top + (bottom - top) * tr.w;
      // Rounding may overshoot the convex hull by an ulp.
      v = std::clamp(v, std::min({a, b, d, e}), std::max({a, b, d, e}));
      out[static_cast<std::size_t>(r) * out_width + c] = v;
    }
  }
  return ScoreMap(out_height, out_width, std::move(out));
}

BinaryMask threshold(const ScoreMap& s, double tau) {
  std::vector<std::uint8_t> out(s.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = s.values()[i] >= tau ? 1 : 0;
  }
  return BinaryMask(s.height(), s.width(), std::move(out));
}

namespace {

class DisjointSets {
 public:
  std::int32_t make() {
    parent_.push_back(static_cast<std::int32_t>(parent_.size()));
    return parent_.back();
  }
  std::int32_t find(std::int32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
  }

 private:
  std::vector<std::int32_t> parent_;
};

}  // namespace

ComponentSet connected_components(const BinaryMask& mask,
                                  Connectivity connectivity) {
  const int h = mask.height();
  const int w = mask.width();
  const bool diag = connectivity == Connectivity::kEight;

  // First pass: provisional labels with equivalences from the already
  // visited neighbours (W, NW, N, NE).
  std::vector<std::int32_t> provisional(mask.size(), -1);
  DisjointSets sets;
  auto idx = [w](int r, int c) { return static_cast<std::size_t>(r) * w + c; };
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (!mask.at(r, c)) continue;
      std::int32_t label = -1;
      auto visit = [&](int rr, int cc) {
        if (rr < 0 || cc < 0 || cc >= w) return;
        const std::int32_t other = provisional[idx(rr, cc)];
        if (other < 0) return;
        if (label < 0) {
          label = other;
        } else {
          sets.unite(label, other);
        }
      };
      visit(r, c - 1);
      visit(r - 1, c);
      if (diag) {
        visit(r - 1, c - 1);
        visit(r - 1, c + 1);
      }
      provisional[idx(r, c)] = label >= 0 ? label : sets.make();
    }
  }

  // Second pass: resolve roots and renumber in row-major first-seen order.
  ComponentSet out;
  out.height = h;
  out.width = w;
  out.connectivity = connectivity;
  out.labels.assign(mask.size(), 0);
  std::vector<std::int32_t> final_label;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (provisional[i] < 0) continue;
    const std::int32_t root = sets.find(provisional[i]);
    if (static_cast<std::size_t>(root) >= final_label.size()) {
      final_label.resize(root + 1, 0);
    }
    if (final_label[root] == 0) final_label[root] = ++out.count;
    out.labels[i] = final_label[root];
  }
  return out;
}

std::vector<ComponentBox> component_boxes(const ComponentSet& components) {
  struct Extent {
    int x0, y0, x1, y1;
    std::int64_t area = 0;
  };
  std::vector<Extent> ext(components.count,
                          Extent{components.width, components.height, 0, 0});
  for (int r = 0; r < components.height; ++r) {
    for (int c = 0; c < components.width; ++c) {
      const std::int32_t label = components.label_at(r, c);
      if (label == 0) continue;
      Extent& e = ext[label - 1];
      e.x0 = std::min(e.x0, c);
      e.y0 = std::min(e.y0, r);
      e.x1 = std::max(e.x1, c + 1);
      e.y1 = std::max(e.y1, r + 1);
      ++e.area;
    }
  }
  std::vector<ComponentBox> boxes;
  boxes.reserve(ext.size());
  for (std::size_t i = 0; i < ext.size(); ++i) {
    const Extent& e = ext[i];
    boxes.push_back({BoundingBox(e.x0, e.y0, e.x1, e.y1), e.area,
                     static_cast<std::int32_t>(i + 1)});
  }
  std::stable_sort(boxes.begin(), boxes.end(),
                   [](const ComponentBox& a, const ComponentBox& b) {
                     return a.area > b.area;
                   });
  return boxes;
}

Normalization normalization_from_string(const std::string& name) {
  if (name == "minmax") return Normalization::kMinMax;
  if (name == "max") return Normalization::kMax;
  if (name == "none") return Normalization::kNone;
  throw InvalidInput("unknown normalization '" + name + "'");
}

std::string to_string(Normalization n) {
  switch (n) {
    case Normalization::kMinMax:
      return "minmax";
    case Normalization::kMax:
      return "max";
    case Normalization::kNone:
      return "none";
  }
  return "?";
}

ResizeOrder resize_order_from_string(const std::string& name) {
  if (name == "calibrate-first") return ResizeOrder::kCalibrateFirst;
  if (name == "resize-first") return ResizeOrder::kResizeFirst;
  throw InvalidInput("unknown resize order '" + name + "'");
}

std::string to_string(ResizeOrder order) {
  return order == ResizeOrder::kCalibrateFirst ? "calibrate-first"
                                               : "resize-first";
}

ScoreMap calibrate(const ScoreMap& s, Normalization normalization) {
  switch (normalization) {
    case Normalization::kMinMax:
      return normalize_minmax(s);
    case Normalization::kMax:
      return normalize_max(s);
    case Normalization::kNone:
      return s;
  }
  return s;
}

ScoreMap prepare_scoremap(const ScoreMap& raw, int out_height, int out_width,
                          Normalization normalization, ResizeOrder order) {
  if (order == ResizeOrder::kCalibrateFirst) {
    return resize_bilinear(calibrate(raw, normalization), out_height,
                           out_width);
  }
  return calibrate(resize_bilinear(raw, out_height, out_width), normalization);
}

}  // namespace wsoleval
