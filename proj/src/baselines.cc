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

#include "wsoleval/baselines.h"

#include <cmath>
#include <vector>

#include "wsoleval/errors.h"
#include "wsoleval/scoremap_ops.h"

namespace wsoleval {

ScoreMap center_gaussian(const GaussianSpec& spec) {
  if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) {
    throw InvalidInput("gaussian sigma must be positive");
  }
  if (spec.height <= 0 || spec.width <= 0) {
    throw InvalidInput("gaussian map dimensions must be positive");
  }
  const double ci = (spec.height - 1) / 2.0;
  const double cj = (spec.width - 1) / 2.0;
  const double denom = 2.0 * spec.sigma * spec.sigma;
  std::vector<double> values(static_cast<std::size_t>(spec.height) *
                             spec.width);
  for (int i = 0; i < spec.height; ++i) {
    for (int j = 0; j < spec.width; ++j) {
      const double di = i - ci;
      const double dj = j - cj;
      values[static_cast<std::size_t>(i) * spec.width + j] =
          std::exp(-(di * di + dj * dj) / denom);
    }
  }
  return normalize_minmax(ScoreMap(spec.height, spec.width, std::move(values)));
}

BinaryMask boxes_to_mask(std::span<const BoundingBox> boxes, int height,
                         int width) {
  BinaryMask mask(height, width);
  for (const BoundingBox& b : boxes) {
    if (!b.fits(height, width)) {
      throw InvalidInput("box " + b.to_string() + " exceeds the " +
                         std::to_string(width) + "x" + std::to_string(height) +
                         " frame");
    }
    for (int r = b.y0(); r < b.y1(); ++r) {
      for (int c = b.x0(); c < b.x1(); ++c) mask.set(r, c, true);
    }
  }
  return mask;
}

}  // namespace wsoleval
