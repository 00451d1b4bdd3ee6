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

#ifndef WSOLEVAL_GEOMETRY_H_
#define WSOLEVAL_GEOMETRY_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace wsoleval {

// Axis-aligned box over half-open pixel intervals [x0, x1) x [y0, y1).
// x indexes columns, y indexes rows. Construction rejects empty boxes, so
// every BoundingBox has positive integer area.
class BoundingBox {
 public:
  BoundingBox(int x0, int y0, int x1, int y1);

  int x0() const { return x0_; }
  int y0() const { return y0_; }
  int x1() const { return x1_; }
  int y1() const { return y1_; }
  int width() const { return x1_ - x0_; }
  int height() const { return y1_ - y0_; }
  std::int64_t area() const {
    return static_cast<std::int64_t>(width()) * height();
  }

  // True if the box lies inside a height x width frame.
  bool fits(int frame_height, int frame_width) const {
    return x1_ <= frame_width && y1_ <= frame_height;
  }

  std::string to_string() const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

 private:
  int x0_, y0_, x1_, y1_;
};

// Number of pixels shared by two boxes.
std::int64_t intersection_area(const BoundingBox& a, const BoundingBox& b);

// Intersection over union on integer pixel counts. The single division is
// correctly rounded, so the result is the nearest double to the exact ratio.
double iou(const BoundingBox& a, const BoundingBox& b);

// Row-major H x W grid of {0,1}.
class BinaryMask {
 public:
  BinaryMask(int height, int width);  // all zeros
  BinaryMask(int height, int width, std::vector<std::uint8_t> values);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return values_.size(); }

  std::uint8_t at(int row, int col) const {
    return values_[static_cast<std::size_t>(row) * width_ + col];
  }
  void set(int row, int col, bool on) {
    values_[static_cast<std::size_t>(row) * width_ + col] = on ? 1 : 0;
  }
  const std::vector<std::uint8_t>& values() const { return values_; }

  std::int64_t count() const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int height_, width_;
  std::vector<std::uint8_t> values_;
};

// Row-major H x W grid of finite localization scores.
class ScoreMap {
 public:
  ScoreMap(int height, int width, double fill = 0.0);
  // Throws InvalidInput on non-finite values or a size mismatch.
  ScoreMap(int height, int width, std::vector<double> values);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return values_.size(); }

  double at(int row, int col) const {
    return values_[static_cast<std::size_t>(row) * width_ + col];
  }
  const std::vector<double>& values() const { return values_; }

  double min() const;
  double max() const;
  // True when every value lies in [0, 1].
  bool is_calibrated() const;

  friend bool operator==(const ScoreMap&, const ScoreMap&) = default;

 private:
  int height_, width_;
  std::vector<double> values_;
};

}  // namespace wsoleval

#endif  // WSOLEVAL_GEOMETRY_H_
