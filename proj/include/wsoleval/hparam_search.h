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

#ifndef WSOLEVAL_HPARAM_SEARCH_H_
#define WSOLEVAL_HPARAM_SEARCH_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace wsoleval {

enum class WsolMethod { kCam, kHaS, kACoL, kSpg, kAdl, kCutMix };

WsolMethod method_from_string(const std::string& name);
std::string to_string(WsolMethod method);

// Sampling distributions of the random search.
struct LogUniform {
  double lo, hi;
};
struct Uniform {
  double lo, hi;
};
struct Categorical {
  std::vector<std::int64_t> values;
};
// Uniform[value of `lower_dim`, hi]; lower_dim must be declared earlier.
struct DependentUniform {
  std::string lower_dim;
  double hi;
};
// 1 / Uniform(0, scale) - offset, with the uniform open at both ends so the
// result is finite and strictly greater than 1/scale - offset.
struct ReciprocalUniform {
  double scale;
  double offset;
};

using Distribution = std::variant<LogUniform, Uniform, Categorical,
                                  DependentUniform, ReciprocalUniform>;

struct Dimension {
  std::string name;
  Distribution distribution;
};

struct HparamSpace {
  WsolMethod method;
  std::vector<Dimension> dimensions;
};

// Search space for a method: the shared learning-rate and score-map
// resolution dimensions followed by the method's own.
HparamSpace search_space(WsolMethod method);

using ParamValue = std::variant<double, std::int64_t>;

struct TrialConfig {
  std::int64_t trial_id;
  WsolMethod method;
  std::map<std::string, ParamValue> values;
  std::uint64_t seed;

  double value_as_double(const std::string& name) const;
};

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Seed of trial `trial_id`: mix64(master + (trial_id + 1) * golden_gamma),
// where golden_gamma = 0x9E3779B97F4A7C15. Each trial samples from its own
// std::mt19937_64 seeded with this value.
std::uint64_t trial_seed(std::uint64_t master_seed, std::int64_t trial_id);

// Samples n configurations. Depends only on (space, n, master_seed); trial k
// is the same whatever n is.
std::vector<TrialConfig> sample_trials(const HparamSpace& space, int n,
                                       std::uint64_t master_seed);

// Throws InvalidInput naming the first value outside its support.
void check_support(const HparamSpace& space, const TrialConfig& config);

// One JSON object per line: {"method","seed","trial_id","values"}.
std::string trial_to_json(const TrialConfig& config);
std::string trials_to_jsonl(std::span<const TrialConfig> configs);

inline constexpr double kNonConvergenceLoss = 2.0;

struct TrialResult {
  std::int64_t trial_id;
  double final_loss;
  double metric_value;
  bool converged;  // final_loss <= kNonConvergenceLoss

  static TrialResult from_loss(std::int64_t trial_id, double final_loss,
                               double metric_value);
};

// Parses CSV `trial_id,final_loss,metric_value` with that header line.
std::vector<TrialResult> parse_results_csv(const std::string& text,
                                           const std::string& source_name);

struct ConvergenceSplit {
  std::vector<TrialResult> converged;
  double failure_ratio;
};

// Throws InvalidInput on empty input.
ConvergenceSplit filter_converged(std::span<const TrialResult> results);

// Best metric among converged trials, ties to the smallest trial_id.
// Non-converged entries are skipped; throws InvalidInput if none remain.
TrialResult select_best(std::span<const TrialResult> results,
                        bool higher_is_better = true);

// Tie-corrected Kendall tau-b in O(n log n). Throws InvalidInput on a
// length mismatch, fewer than two items, or a list that is entirely tied
// (tau-b is undefined there).
double kendall_tau(std::span<const double> a, std::span<const double> b);

}  // namespace wsoleval

#endif  // WSOLEVAL_HPARAM_SEARCH_H_
