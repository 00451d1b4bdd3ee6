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

#include "wsoleval/hparam_search.h"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "wsoleval/errors.h"

namespace wsoleval {
namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// Uniform on the open interval (0, 1): 52 random bits centred in their cell.
double open_unit(std::mt19937_64& rng) {
  const std::uint64_t bits = rng() >> 12;
  return (static_cast<double>(bits) + 0.5) * 0x1p-52;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

WsolMethod method_from_string(const std::string& name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (upper == "CAM") return WsolMethod::kCam;
  if (upper == "HAS") return WsolMethod::kHaS;
  if (upper == "ACOL") return WsolMethod::kACoL;
  if (upper == "SPG") return WsolMethod::kSpg;
  if (upper == "ADL") return WsolMethod::kAdl;
  if (upper == "CUTMIX") return WsolMethod::kCutMix;
  throw InvalidInput("unknown method '" + name +
                     "' (expected CAM, HaS, ACoL, SPG, ADL or CutMix)");
}

std::string to_string(WsolMethod method) {
  switch (method) {
    case WsolMethod::kCam:
      return "CAM";
    case WsolMethod::kHaS:
      return "HaS";
    case WsolMethod::kACoL:
      return "ACoL";
    case WsolMethod::kSpg:
      return "SPG";
    case WsolMethod::kAdl:
      return "ADL";
    case WsolMethod::kCutMix:
      return "CutMix";
  }
  return "?";
}

HparamSpace search_space(WsolMethod method) {
  HparamSpace space{method,
                    {{"learning_rate", LogUniform{1e-5, 1.0}},
                     {"scoremap_resolution", Categorical{{14, 28}}}}};
  auto add = [&space](std::string name, Distribution d) {
    space.dimensions.push_back({std::move(name), std::move(d)});
  };
  switch (method) {
    case WsolMethod::kCam:
      break;
    case WsolMethod::kHaS:
      add("drop_rate", Uniform{0.0, 1.0});
      // Continuous; discretizing into a patch grid is the trainer's job.
      add("drop_area", Uniform{0.0, 1.0});
      break;
    case WsolMethod::kACoL:
      add("erasing_threshold", Uniform{0.0, 1.0});
      break;
    case WsolMethod::kSpg:
      for (const char* branch : {"b1", "b2", "c"}) {
        const std::string lower = std::string("delta_l_") + branch;
        add(lower, Uniform{0.0, 1.0});
        add(std::string("delta_h_") + branch, DependentUniform{lower, 1.0});
      }
      break;
    case WsolMethod::kAdl:
      add("drop_rate", Uniform{0.0, 1.0});
      add("erasing_threshold", Uniform{0.0, 1.0});
      break;
    case WsolMethod::kCutMix:
      add("size_prior", ReciprocalUniform{2.0, 0.5});
      add("mix_rate", Uniform{0.0, 1.0});
      break;
  }
  return space;
}

double TrialConfig::value_as_double(const std::string& name) const {
  auto it = values.find(name);
  if (it == values.end()) {
    throw InvalidInput("trial " + std::to_string(trial_id) + " has no '" +
                       name + "'");
  }
  return std::visit([](auto v) { return static_cast<double>(v); }, it->second);
}

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::int64_t trial_id) {
  return mix64(master_seed +
               (static_cast<std::uint64_t>(trial_id) + 1) * kGoldenGamma);
}

std::vector<TrialConfig> sample_trials(const HparamSpace& space, int n,
                                       std::uint64_t master_seed) {
  if (n < 1) throw InvalidInput("number of trials must be at least 1");
  std::vector<TrialConfig> trials;
  trials.reserve(n);
  for (std::int64_t id = 0; id < n; ++id) {
    TrialConfig config{id, space.method, {}, trial_seed(master_seed, id)};
    std::mt19937_64 rng(config.seed);
    for (const Dimension& dim : space.dimensions) {
      const double u = open_unit(rng);
      ParamValue value = std::visit(
          Overloaded{
              [&](const LogUniform& d) -> ParamValue {
                const double lo = std::log(d.lo);
                const double v = std::exp(lo + (std::log(d.hi) - lo) * u);
                return std::clamp(v, d.lo, d.hi);
              },
              [&](const Uniform& d) -> ParamValue {
                return d.lo + (d.hi - d.lo) * u;
              },
              [&](const Categorical& d) -> ParamValue {
                const auto k = static_cast<std::size_t>(
                    u * static_cast<double>(d.values.size()));
                return d.values[std::min(k, d.values.size() - 1)];
              },
              [&](const DependentUniform& d) -> ParamValue {
                const double lower = config.value_as_double(d.lower_dim);
                return std::clamp(lower + (d.hi - lower) * u, lower, d.hi);
              },
              [&](const ReciprocalUniform& d) -> ParamValue {
                return 1.0 / (d.scale * u) - d.offset;
              },
          },
          dim.distribution);
      config.values.emplace(dim.name, value);
    }
    trials.push_back(std::move(config));
  }
  return trials;
}

void check_support(const HparamSpace& space, const TrialConfig& config) {
  for (const Dimension& dim : space.dimensions) {
    const double v = config.value_as_double(dim.name);
    const bool ok = std::visit(
        Overloaded{
            [&](const LogUniform& d) { return v >= d.lo && v <= d.hi; },
            [&](const Uniform& d) { return v >= d.lo && v <= d.hi; },
            [&](const Categorical& d) {
              return std::find(d.values.begin(), d.values.end(),
                               static_cast<std::int64_t>(v)) !=
                         d.values.end() &&
                     std::holds_alternative<std::int64_t>(
                         config.values.at(dim.name));
            },
            [&](const DependentUniform& d) {
              return v >= config.value_as_double(d.lower_dim) && v <= d.hi;
            },
            [&](const ReciprocalUniform& d) {
              return std::isfinite(v) && v > 1.0 / d.scale - d.offset;
            },
        },
        dim.distribution);
    if (!ok) {
      std::ostringstream os;
      os.precision(17);
      os << "trial " << config.trial_id << ": " << dim.name << " = " << v
         << " lies outside its support";
      throw InvalidInput(os.str());
    }
  }
}

std::string trial_to_json(const TrialConfig& config) {
  nlohmann::json values = nlohmann::json::object();
  for (const auto& entry : config.values) {
    std::visit([&](auto v) { values[entry.first] = v; }, entry.second);
  }
  nlohmann::json j = {{"trial_id", config.trial_id},
                      {"method", to_string(config.method)},
                      {"seed", config.seed},
                      {"values", values}};
  return j.dump();
}

std::string trials_to_jsonl(std::span<const TrialConfig> configs) {
  std::string out;
  for (const TrialConfig& c : configs) {
    out += trial_to_json(c);
    out += '\n';
  }
  return out;
}

TrialResult TrialResult::from_loss(std::int64_t trial_id, double final_loss,
                                   double metric_value) {
  return {trial_id, final_loss, metric_value,
          final_loss <= kNonConvergenceLoss};
}

std::vector<TrialResult> parse_results_csv(const std::string& text,
                                           const std::string& source_name) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ParseError(source_name + ":" + std::to_string(line_no) + ": " + what);
  };
  std::vector<TrialResult> results;
  std::set<std::int64_t> seen;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != "trial_id,final_loss,metric_value") {
        fail("expected header 'trial_id,final_loss,metric_value'");
      }
      header = true;
      continue;
    }
    std::istringstream fields(line);
    std::string id_s, loss_s, metric_s, extra;
    if (!std::getline(fields, id_s, ',') ||
        !std::getline(fields, loss_s, ',') ||
        !std::getline(fields, metric_s, ',') || std::getline(fields, extra)) {
      fail("expected 3 comma-separated fields");
    }
    std::int64_t id = 0;
    double loss = 0.0, metric = 0.0;
    try {
      std::size_t pos = 0;
      id = std::stoll(id_s, &pos);
      if (pos != id_s.size() || id < 0) fail("bad trial_id '" + id_s + "'");
      loss = std::stod(loss_s, &pos);
      if (pos != loss_s.size()) fail("bad final_loss '" + loss_s + "'");
      metric = std::stod(metric_s, &pos);
      if (pos != metric_s.size()) fail("bad metric_value '" + metric_s + "'");
    } catch (const std::logic_error&) {
      fail("unparsable number");
    }
    if (!std::isfinite(metric) || std::isnan(loss) || loss < 0.0) {
      fail("final_loss must be non-negative and metric_value finite");
    }
    if (!seen.insert(id).second) {
      fail("duplicate trial_id " + std::to_string(id));
    }
    results.push_back(TrialResult::from_loss(id, loss, metric));
  }
  if (!header) throw ParseError(source_name + ": empty results file");
  return results;
}

ConvergenceSplit filter_converged(std::span<const TrialResult> results) {
  if (results.empty()) {
    throw InvalidInput("failure ratio is undefined for zero trials");
  }
  ConvergenceSplit split{{}, 0.0};
  for (const TrialResult& r : results) {
    if (r.converged) split.converged.push_back(r);
  }
  const std::size_t failures = results.size() - split.converged.size();
  split.failure_ratio =
      static_cast<double>(failures) / static_cast<double>(results.size());
  return split;
}

TrialResult select_best(std::span<const TrialResult> results,
                        bool higher_is_better) {
  const TrialResult* best = nullptr;
  for (const TrialResult& r : results) {
    if (!r.converged) continue;
    if (best == nullptr) {
      best = &r;
      continue;
    }
    const bool better = higher_is_better ? r.metric_value > best->metric_value
                                         : r.metric_value < best->metric_value;
    const bool tie_wins =
        r.metric_value == best->metric_value && r.trial_id < best->trial_id;
    if (better || tie_wins) best = &r;
  }
  if (best == nullptr) throw InvalidInput("no converged trial to select from");
  return *best;
}

namespace {

// Sum over runs of equal adjacent values of run_length choose 2.
template <typename It, typename Eq>
std::int64_t tied_pairs(It first, It last, Eq eq) {
  std::int64_t pairs = 0;
  while (first != last) {
    It run_end = first + 1;
    while (run_end != last && eq(*first, *run_end)) ++run_end;
    const std::int64_t t = run_end - first;
    pairs += t * (t - 1) / 2;
    first = run_end;
  }
  return pairs;
}

// Stable merge sort of v counting inversions (pairs i < j with v[i] > v[j]).
std::int64_t sort_counting_swaps(std::vector<double>& v,
                                 std::vector<double>& scratch, std::size_t lo,
                                 std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = sort_counting_swaps(v, scratch, lo, mid) +
                       sort_counting_swaps(v, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      scratch[k++] = v[j++];
    } else {
      scratch[k++] = v[i++];
    }
  }
  while (i < mid) scratch[k++] = v[i++];
  while (j < hi) scratch[k++] = v[j++];
  std::copy(scratch.begin() + lo, scratch.begin() + hi, v.begin() + lo);
  return swaps;
}

}  // namespace

double kendall_tau(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidInput("kendall tau needs equal-length lists, got " +
                       std::to_string(a.size()) + " and " +
                       std::to_string(b.size()));
  }
  const std::size_t n = a.size();
  if (n < 2) throw InvalidInput("kendall tau needs at least two items");
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(a[i]) || std::isnan(b[i])) {
      throw InvalidInput("kendall tau input contains NaN");
    }
  }

  std::vector<std::pair<double, double>> pairs(n);
  for (std::size_t i = 0; i < n; ++i) pairs[i] = {a[i], b[i]};
  std::sort(pairs.begin(), pairs.end());

  const std::int64_t total = static_cast<std::int64_t>(n) * (n - 1) / 2;
  const std::int64_t ties_a = tied_pairs(
      pairs.begin(), pairs.end(),
      [](const auto& x, const auto& y) { return x.first == y.first; });
  const std::int64_t ties_joint =
      tied_pairs(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
        return x.first == y.first && x.second == y.second;
      });

  // Within equal-a runs b is already ascending, so every inversion left in
  // b is a discordant pair.
  std::vector<double> bs(n), scratch(n);
  for (std::size_t i = 0; i < n; ++i) bs[i] = pairs[i].second;
  const std::int64_t discordant = sort_counting_swaps(bs, scratch, 0, n);
  const std::int64_t ties_b =
      tied_pairs(bs.begin(), bs.end(), std::equal_to<double>());

  const std::int64_t untied_a = total - ties_a;
  const std::int64_t untied_b = total - ties_b;
  if (untied_a == 0 || untied_b == 0) {
    throw InvalidInput("kendall tau-b is undefined when a list is all ties");
  }
  // concordant - discordant over pairs untied in both lists.
  const std::int64_t numerator =
      total - ties_a - ties_b + ties_joint - 2 * discordant;
  return static_cast<double>(numerator) /
         std::sqrt(static_cast<double>(untied_a) *
                   static_cast<double>(untied_b));
}

}  // namespace wsoleval
