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

#ifndef WSOLEVAL_BASELINES_H_
#define WSOLEVAL_BASELINES_H_

#include <span>

#include "wsoleval/geometry.h"

namespace wsoleval {

struct GaussianSpec {
  int height;
  int width;
  double sigma = 1.0;  // pixels
};

// Isotropic Gaussian centred at ((H-1)/2, (W-1)/2), min-max calibrated.
// Every sigma yields the same ordering of pixels (by squared distance to the
// centre), hence the same super-level sets. Caveat: exp() underflows to 0
// once d^2 / (2 sigma^2) passes ~745, which merges the far levels, so that
// invariance only holds while the frame stays inside that range.
ScoreMap center_gaussian(const GaussianSpec& spec);

// Union of box interiors. Throws InvalidInput if a box leaves the frame.
BinaryMask boxes_to_mask(std::span<const BoundingBox> boxes, int height,
                         int width);

}  // namespace wsoleval

#endif  // WSOLEVAL_BASELINES_H_
