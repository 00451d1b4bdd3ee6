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

#include "wsoleval/geometry.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wsoleval/errors.h"

namespace wsoleval {
namespace {

void check_dims(int height, int width) {
  if (height <= 0 || width <= 0) {
    throw InvalidInput("grid dimensions must be positive, got " +
                       std::to_string(height) + "x" + std::to_string(width));
  }
}

}  // namespace

BoundingBox::BoundingBox(int x0, int y0, int x1, int y1)
    : x0_(x0), y0_(y0), x1_(x1), y1_(y1) {
  if (x0 < 0 || y0 < 0 || x0 >= x1 || y0 >= y1) {
    throw InvalidInput("invalid box " + to_string() +
                       ": need 0 <= x0 < x1 and 0 <= y0 < y1");
  }
}

std::string BoundingBox::to_string() const {
  std::ostringstream os;
  os << "(" << x0_ << "," << y0_ << "," << x1_ << "," << y1_ << ")";
  return os.str();
}

std::int64_t intersection_area(const BoundingBox& a, const BoundingBox& b) {
  const int w = std::min(a.x1(), b.x1()) - std::max(a.x0(), b.x0());
  const int h = std::min(a.y1(), b.y1()) - std::max(a.y0(), b.y0());
  if (w <= 0 || h <= 0) return 0;
  return static_cast<std::int64_t>(w) * h;
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  const std::int64_t inter = intersection_area(a, b);
  const std::int64_t uni = a.area() + b.area() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

BinaryMask::BinaryMask(int height, int width) : height_(height), width_(width) {
  check_dims(height, width);
  values_.assign(static_cast<std::size_t>(height) * width, 0);
}

BinaryMask::BinaryMask(int height, int width, std::vector<std::uint8_t> values)
    : height_(height), width_(width), values_(std::move(values)) {
  check_dims(height, width);
  if (values_.size() != static_cast<std::size_t>(height) * width) {
    throw InvalidInput("mask value count does not match dimensions");
  }
  for (std::uint8_t v : values_) {
    if (v > 1) throw InvalidInput("mask values must be 0 or 1");
  }
}

std::int64_t BinaryMask::count() const {
  return std::count(values_.begin(), values_.end(), std::uint8_t{1});
}

ScoreMap::ScoreMap(int height, int width, double fill)
    : height_(height), width_(width) {
  check_dims(height, width);
  if (!std::isfinite(fill)) throw InvalidInput("score map fill is not finite");
  values_.assign(static_cast<std::size_t>(height) * width, fill);
}

ScoreMap::ScoreMap(int height, int width, std::vector<double> values)
    : height_(height), width_(width), values_(std::move(values)) {
  check_dims(height, width);
  if (values_.size() != static_cast<std::size_t>(height) * width) {
    throw InvalidInput("score map value count does not match dimensions");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidInput("score map has non-finite value");
  }
}

double ScoreMap::min() const {
  return *std::min_element(values_.begin(), values_.end());
}

double ScoreMap::max() const {
  return *std::max_element(values_.begin(), values_.end());
}

bool ScoreMap::is_calibrated() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return v >= 0.0 && v <= 1.0; });
}

}  // namespace wsoleval
