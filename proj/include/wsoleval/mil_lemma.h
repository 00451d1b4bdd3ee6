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

#ifndef WSOLEVAL_MIL_LEMMA_H_
#define WSOLEVAL_MIL_LEMMA_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wsoleval {

// A patch cue M with its prior p(M), the image-label posterior
// p(Y=1 | M) used as its score, and its foreground label T(M).
struct Cue {
  std::string name;
  double prior;
  double posterior;
  bool foreground;
};

// Finite joint distribution over cues. Cues with zero prior are carried but
// never influence any predicate (they form a null set).
class CueWorld {
 public:
  // Throws InvalidInput unless priors are non-negative and sum to 1 within
  // 1e-12, posteriors lie in [0, 1], and both a foreground and a background
  // cue have positive prior.
  explicit CueWorld(std::vector<Cue> cues);

  const std::vector<Cue>& cues() const { return cues_; }
  std::string to_string() const;

 private:
  std::vector<Cue> cues_;
};

// P(s >= tau, T = 1) + P(s < tau, T = 0) with s(M) = p(Y=1 | M).
double px_acc(const CueWorld& world, double tau);

struct PerfectThreshold {
  bool exists = false;
  std::optional<double> witness;
};

// Decides whether some real tau classifies every positive-prior cue
// correctly under the s >= tau rule. px_acc only changes at posterior
// values, so it suffices to test one tau per interval of the sorted distinct
// posteriors: 0 for (-inf, p_0], the midpoint for (p_{k-1}, p_k], and the
// next double above p_max for the top interval.
PerfectThreshold perfect_threshold_exists(const CueWorld& world);

enum class BoundaryConvention {
  // min fg posterior > max bg posterior. Matches s >= tau thresholding: at
  // equality the boundary background cue is predicted foreground.
  kStrict,
  // min fg posterior >= max bg posterior, i.e. every fg/bg posterior ratio
  // is at least 1, read literally.
  kInclusive,
};

// The posterior-ratio condition over all positive-prior (fg, bg) cue pairs.
bool posterior_ratio_condition(
    const CueWorld& world,
    BoundaryConvention convention = BoundaryConvention::kStrict);

// alpha = [p(fg|Y=1) / p(bg|Y=1)] * [p(fg) / p(bg)]^-1 where
// p(cue) = p(cue|Y=1) p(Y=1) + p(cue|Y=0) p(Y=0). Throws InvalidInput on
// inputs outside [0, 1] or a zero denominator.
double posterior_ratio_from_likelihoods(double p_fg_given_y1,
                                        double p_bg_given_y1,
                                        double p_fg_given_y0,
                                        double p_bg_given_y0, double p_y1);

struct LemmaCheckSummary {
  std::int64_t worlds = 0;
  // Worlds where perfect_threshold_exists != posterior_ratio_condition
  // under the strict convention.
  std::int64_t disagreements = 0;
  // Same count under the inclusive convention; these are exactly the worlds
  // whose min fg posterior equals their max bg posterior.
  std::int64_t inclusive_disagreements = 0;
  std::optional<CueWorld> first_counterexample;
};

// Every world with 2..max_cues cues of uniform prior, posteriors drawn from
// {1/(g+1), ..., g/(g+1)} for g = grid_points, and every fg/bg labeling that
// uses both classes.
LemmaCheckSummary check_lemma_exhaustive(int max_cues, int grid_points);

}  // namespace wsoleval

#endif  // WSOLEVAL_MIL_LEMMA_H_
