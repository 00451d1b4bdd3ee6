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

#include "wsoleval/mil_lemma.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wsoleval/errors.h"

namespace wsoleval {

CueWorld::CueWorld(std::vector<Cue> cues) : cues_(std::move(cues)) {
  double total = 0.0;
  bool has_fg = false, has_bg = false;
  for (const Cue& c : cues_) {
    if (!(c.prior >= 0.0) || !std::isfinite(c.prior)) {
      throw InvalidInput("cue '" + c.name + "' has a negative prior");
    }
    if (!(c.posterior >= 0.0 && c.posterior <= 1.0)) {
      throw InvalidInput("cue '" + c.name + "' posterior outside [0, 1]");
    }
    total += c.prior;
    if (c.prior > 0.0) (c.foreground ? has_fg : has_bg) = true;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidInput("cue priors sum to " + std::to_string(total) +
                       ", not 1");
  }
  if (!has_fg || !has_bg) {
    throw InvalidInput(
        "cue world needs a foreground and a background cue with positive "
        "prior");
  }
}

std::string CueWorld::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << "{";
  for (std::size_t i = 0; i < cues_.size(); ++i) {
    const Cue& c = cues_[i];
    if (i) os << ", ";
    os << c.name << ": prior=" << c.prior << " posterior=" << c.posterior
       << (c.foreground ? " fg" : " bg");
  }
  os << "}";
  return os.str();
}

double px_acc(const CueWorld& world, double tau) {
  double acc = 0.0;
  for (const Cue& c : world.cues()) {
    const bool predicted_fg = c.posterior >= tau;
    if (predicted_fg == c.foreground) acc += c.prior;
  }
  return acc;
}

namespace {

bool classifies_all(const CueWorld& world, double tau) {
  for (const Cue& c : world.cues()) {
    if (c.prior > 0.0 && (c.posterior >= tau) != c.foreground) return false;
  }
  return true;
}

}  // namespace

PerfectThreshold perfect_threshold_exists(const CueWorld& world) {
  std::vector<double> levels;
  for (const Cue& c : world.cues()) {
    if (c.prior > 0.0) levels.push_back(c.posterior);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::vector<double> candidates;
  candidates.push_back(std::min(0.0, levels.front()));
  for (std::size_t k = 1; k < levels.size(); ++k) {
    candidates.push_back(levels[k - 1] + (levels[k] - levels[k - 1]) / 2.0);
  }
  candidates.push_back(
      std::nextafter(levels.back(), std::numeric_limits<double>::infinity()));

  for (double tau : candidates) {
    if (classifies_all(world, tau)) return {true, tau};
  }
  return {false, std::nullopt};
}

bool posterior_ratio_condition(const CueWorld& world,
                               BoundaryConvention convention) {
  double min_fg = std::numeric_limits<double>::infinity();
  double max_bg = -std::numeric_limits<double>::infinity();
  for (const Cue& c : world.cues()) {
    if (c.prior <= 0.0) continue;
    if (c.foreground) {
      min_fg = std::min(min_fg, c.posterior);
    } else {
      max_bg = std::max(max_bg, c.posterior);
    }
  }
  return convention == BoundaryConvention::kStrict ? min_fg > max_bg
                                                   : min_fg >= max_bg;
}

double posterior_ratio_from_likelihoods(double p_fg_given_y1,
                                        double p_bg_given_y1,
                                        double p_fg_given_y0,
                                        double p_bg_given_y0, double p_y1) {
  for (double p :
       {p_fg_given_y1, p_bg_given_y1, p_fg_given_y0, p_bg_given_y0, p_y1}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidInput("probabilities must lie in [0, 1]");
    }
  }
  const double p_y0 = 1.0 - p_y1;
  const double p_fg = p_fg_given_y1 * p_y1 + p_fg_given_y0 * p_y0;
  const double p_bg = p_bg_given_y1 * p_y1 + p_bg_given_y0 * p_y0;
  if (p_bg_given_y1 == 0.0 || p_fg == 0.0 || p_bg == 0.0) {
    throw InvalidInput("posterior ratio has a zero denominator");
  }
  const double likelihood_ratio = p_fg_given_y1 / p_bg_given_y1;
  const double prior_ratio = p_fg / p_bg;
  return likelihood_ratio / prior_ratio;
}

LemmaCheckSummary check_lemma_exhaustive(int max_cues, int grid_points) {
  if (max_cues < 2) throw InvalidInput("max_cues must be at least 2");
  if (grid_points < 1) throw InvalidInput("posterior grid must be non-empty");
  std::vector<double> grid(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    grid[i] = static_cast<double>(i + 1) / (grid_points + 1);
  }

  LemmaCheckSummary summary;
  for (int k = 2; k <= max_cues; ++k) {
    std::vector<Cue> cues(k);
    for (int i = 0; i < k; ++i) {
      cues[i].name = "m" + std::to_string(i);
      cues[i].prior = 1.0 / k;
    }
    std::vector<int> digits(k, 0);
    while (true) {
      for (int i = 0; i < k; ++i) cues[i].posterior = grid[digits[i]];
      // Labelings 1 .. 2^k - 2 use both classes.
      for (std::uint32_t labels = 1; labels + 1 < (1u << k); ++labels) {
        for (int i = 0; i < k; ++i) cues[i].foreground = (labels >> i) & 1u;
        const CueWorld world(cues);
        const bool perfect = perfect_threshold_exists(world).exists;
        ++summary.worlds;
        if (perfect != posterior_ratio_condition(world)) {
          ++summary.disagreements;
          if (!summary.first_counterexample) {
            summary.first_counterexample = world;
          }
        }
        if (perfect !=
            posterior_ratio_condition(world, BoundaryConvention::kInclusive)) {
          ++summary.inclusive_disagreements;
        }
      }
      int pos = 0;
      while (pos < k && ++digits[pos] == grid_points) digits[pos++] = 0;
      if (pos == k) break;
    }
  }
  return summary;
}

}  // namespace wsoleval
