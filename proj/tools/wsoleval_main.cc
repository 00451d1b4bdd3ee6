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

// wsoleval: command-line front end for localization evaluation and the
// surrounding protocol tooling.
//
// Exit codes: 0 success, 1 a metric precondition failed mid-run, 2 bad
// input or configuration.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "wsoleval/baselines.h"
#include "wsoleval/dataset_io.h"
#include "wsoleval/errors.h"
#include "wsoleval/evaluate.h"
#include "wsoleval/hparam_search.h"
#include "wsoleval/mil_lemma.h"

namespace fs = std::filesystem;
using namespace wsoleval;

namespace {

constexpr int kExitPrecondition = 1;
constexpr int kExitInput = 2;

struct EvalFlags {
  std::string manifest;
  std::string scoremaps;
  std::vector<double> deltas;
  double grid = ThresholdGrid::kDefaultSpacing;
  bool exact = false;
  int connectivity = 8;
  std::string normalize = "minmax";
  std::string resize_order = "calibrate-first";
  std::string tau_selection = "per-delta";
  bool strict_size = false;
  int threads = 1;
  std::string output;

  EvalConfig to_config() const {
    EvalConfig c;
    c.deltas = deltas;
    c.grid_spacing = grid;
    c.exact_thresholds = exact;
    c.connectivity = connectivity_from_int(connectivity);
    c.normalization = normalization_from_string(normalize);
    c.resize_order = resize_order_from_string(resize_order);
    if (tau_selection == "per-delta") {
      c.tau_selection = TauSelection::kPerDelta;
    } else if (tau_selection == "shared") {
      c.tau_selection = TauSelection::kShared;
    } else {
      throw InvalidInput("unknown tau selection '" + tau_selection + "'");
    }
    c.strict_size = strict_size;
    c.threads = threads;
    return c;
  }
};

void add_eval_flags(CLI::App* cmd, EvalFlags& f) {
  cmd->add_option("--manifest", f.manifest, "Split manifest (JSON Lines)")
      ->required();
  cmd->add_option("--scoremaps", f.scoremaps,
                  "Directory holding <image_id>.wsm|.png|.pgm")
      ->required();
  cmd->add_option("--delta", f.deltas, "IoU thresholds, comma separated")
      ->delimiter(',');
  cmd->add_option("--grid", f.grid, "Threshold grid spacing")
      ->capture_default_str();
  cmd->add_flag("--exact-thresholds", f.exact,
                "Use every distinct score as a threshold");
  cmd->add_option("--connectivity", f.connectivity)
      ->check(CLI::IsMember({4, 8}))
      ->capture_default_str();
  cmd->add_option("--normalize", f.normalize)
      ->check(CLI::IsMember({"minmax", "max", "none"}))
      ->capture_default_str();
  cmd->add_option("--resize-order", f.resize_order)
      ->check(CLI::IsMember({"calibrate-first", "resize-first"}))
      ->capture_default_str();
  cmd->add_option("--tau-selection", f.tau_selection,
                  "MaxBoxAccV2 operating point: per-delta or shared")
      ->check(CLI::IsMember({"per-delta", "shared"}))
      ->capture_default_str();
  cmd->add_flag("--strict-size", f.strict_size,
                "Reject score maps whose size differs from the manifest");
  cmd->add_option("--threads", f.threads)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int run_evaluate(const EvalFlags& f, const std::string& metric_name) {
  const EvalConfig config = f.to_config();
  const Metric metric = metric_from_string(metric_name);
  const SplitManifest manifest = load_manifest(f.manifest);
  const EvalReport report = evaluate(manifest, f.scoremaps, metric, config);
  std::cout << report_to_json(report) << "\n";
  if (!f.output.empty()) {
    std::ostringstream csv;
    write_curve_csv(csv, report);
    write_or_print(f.output, csv.str());
  }
  return 0;
}

int run_curve(const EvalFlags& f, const std::string& kind) {
  Metric metric = Metric::kPxAP;
  if (kind == "boxacc") {
    metric = Metric::kMaxBoxAcc;
  } else if (kind == "boxaccv2") {
    metric = Metric::kMaxBoxAccV2;
  }
  const SplitManifest manifest = load_manifest(f.manifest);
  const EvalReport report =
      evaluate(manifest, f.scoremaps, metric, f.to_config());
  std::ostringstream csv;
  write_curve_csv(csv, report);
  write_or_print(f.output, csv.str());
  return 0;
}

std::map<std::int64_t, TrialResult> results_by_id(const std::string& path) {
  std::map<std::int64_t, TrialResult> out;
  for (const TrialResult& r : parse_results_csv(read_text(path), path)) {
    out.emplace(r.trial_id, r);
  }
  return out;
}

int run_rank_transfer(const std::string& a_path, const std::string& b_path,
                      bool converged_only) {
  const auto a = results_by_id(a_path);
  const auto b = results_by_id(b_path);
  std::vector<double> xs, ys;
  std::size_t skipped = 0;
  for (const auto& [id, ra] : a) {
    auto it = b.find(id);
    if (it == b.end()) continue;
    if (converged_only && (!ra.converged || !it->second.converged)) {
      ++skipped;
      continue;
    }
    xs.push_back(ra.metric_value);
    ys.push_back(it->second.metric_value);
  }
  const double tau = kendall_tau(xs, ys);
  std::cout << "n_trials," << xs.size() << "\n";
  if (converged_only) std::cout << "skipped_non_converged," << skipped << "\n";
  std::cout << "kendall_tau," << format_double(tau) << "\n";
  return 0;
}

int run_select_best(const std::string& path, bool lower_is_better) {
  const std::vector<TrialResult> results =
      parse_results_csv(read_text(path), path);
  const ConvergenceSplit split = filter_converged(results);
  const TrialResult best = select_best(split.converged, !lower_is_better);
  std::cout << "n_trials," << results.size() << "\n"
            << "n_converged," << split.converged.size() << "\n"
            << "failure_ratio," << format_double(split.failure_ratio) << "\n"
            << "best_trial_id," << best.trial_id << "\n"
            << "best_metric_value," << format_double(best.metric_value) << "\n"
            << "best_final_loss," << format_double(best.final_loss) << "\n";
  return 0;
}

int run_lemma(int max_cues, int grid_points) {
  const LemmaCheckSummary s = check_lemma_exhaustive(max_cues, grid_points);
  std::cout << "worlds checked: " << s.worlds << " (2.." << max_cues
            << " cues, posterior grid " << grid_points << ")\n";
  std::cout << s.disagreements
            << " disagreements between perfect-threshold existence and the "
               "posterior-ratio condition (strict boundary)\n";
  std::cout << "inclusive-boundary variant: " << s.inclusive_disagreements
            << " disagreements (worlds where min fg posterior equals max bg "
               "posterior)\n";
  if (s.first_counterexample) {
    std::cout << "counterexample: " << s.first_counterexample->to_string()
              << "\n";
  }
  return 0;
}

int run_center_baseline(const std::string& manifest_path,
                        const std::string& out_dir, double sigma) {
  const SplitManifest manifest = load_manifest(manifest_path);
  fs::create_directories(out_dir);
  for (const ManifestEntry& e : manifest.entries) {
    const ScoreMap map = center_gaussian({e.height, e.width, sigma});
    write_scoremap_raw(fs::path(out_dir) / (e.image_id + ".wsm"), map);
  }
  std::cout << "wrote " << manifest.entries.size() << " score maps to "
            << out_dir << "\n";
  return 0;
}

int run_check_splits(const std::vector<std::string>& paths) {
  std::vector<SplitManifest> manifests;
  for (const std::string& p : paths) manifests.push_back(load_manifest(p));
  const std::vector<SplitOverlap> overlaps = check_disjoint(manifests);
  for (const SplitOverlap& o : overlaps) {
    std::cout << o.image_id << ":";
    for (Split s : o.splits) std::cout << " " << to_string(s);
    std::cout << "\n";
  }
  std::cout << overlaps.size() << " image ids shared between splits\n";
  return overlaps.empty() ? 0 : kExitPrecondition;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Threshold-independent evaluation for weakly-supervised object "
      "localization"};
  app.require_subcommand(1);

  EvalFlags eval_flags;
  std::string metric = "maxboxacc";
  CLI::App* evaluate_cmd =
      app.add_subcommand("evaluate", "Compute MaxBoxAcc, MaxBoxAccV2 or PxAP");
  add_eval_flags(evaluate_cmd, eval_flags);
  evaluate_cmd->add_option("--metric", metric)
      ->check(CLI::IsMember({"maxboxacc", "maxboxaccv2", "pxap"}))
      ->capture_default_str();
  evaluate_cmd->add_option("--output", eval_flags.output,
                           "Also write the underlying curve as CSV");

  EvalFlags curve_flags;
  std::string kind = "boxacc";
  CLI::App* curve_cmd = app.add_subcommand(
      "curve", "Export BoxAcc-vs-threshold or precision-recall curves");
  add_eval_flags(curve_cmd, curve_flags);
  curve_cmd->add_option("--kind", kind)
      ->check(CLI::IsMember({"boxacc", "boxaccv2", "pr"}))
      ->capture_default_str();
  curve_cmd->add_option("--output", curve_flags.output,
                        "CSV destination (stdout if omitted)");

  std::string method;
  int n_trials = 30;
  std::uint64_t seed = 0;
  std::string trials_out;
  CLI::App* sample_cmd = app.add_subcommand(
      "sample-hparams", "Sample random-search trial configurations");
  sample_cmd->add_option("--method", method)->required();
  sample_cmd->add_option("--n", n_trials)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sample_cmd->add_option("--seed", seed)->capture_default_str();
  sample_cmd->add_option("--output", trials_out, "JSON Lines destination");

  std::string results_a, results_b;
  bool converged_only = false;
  CLI::App* rank_cmd = app.add_subcommand(
      "rank-transfer", "Kendall tau between two trial result files");
  rank_cmd->add_option("a", results_a)->required();
  rank_cmd->add_option("b", results_b)->required();
  rank_cmd->add_flag("--converged-only", converged_only,
                     "Drop trials that failed to converge in either file");

  std::string results_path;
  bool lower_is_better = false;
  CLI::App* best_cmd = app.add_subcommand(
      "select-best", "Filter non-converged trials and pick the best one");
  best_cmd->add_option("results", results_path)->required();
  best_cmd->add_flag("--lower-is-better", lower_is_better);

  int max_cues = 5;
  int posterior_grid = 9;
  CLI::App* lemma_cmd = app.add_subcommand(
      "lemma", "Exhaustively check the perfect-threshold equivalence");
  lemma_cmd->add_option("--max-cues", max_cues)
      ->check(CLI::Range(2, 8))
      ->capture_default_str();
  lemma_cmd->add_option("--posterior-grid", posterior_grid)
      ->check(CLI::Range(1, 99))
      ->capture_default_str();

  std::string baseline_manifest, baseline_out;
  double sigma = 1.0;
  CLI::App* center_cmd = app.add_subcommand(
      "center-baseline", "Write center-gaussian score maps for a manifest");
  center_cmd->add_option("--manifest", baseline_manifest)->required();
  center_cmd->add_option("--out", baseline_out, "Output directory")->required();
  center_cmd->add_option("--sigma", sigma)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::vector<std::string> split_paths;
  CLI::App* splits_cmd = app.add_subcommand(
      "check-splits", "Report image ids shared between split manifests");
  splits_cmd->add_option("manifests", split_paths)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*evaluate_cmd) return run_evaluate(eval_flags, metric);
    if (*curve_cmd) return run_curve(curve_flags, kind);
    if (*sample_cmd) {
      const HparamSpace space = search_space(method_from_string(method));
      const std::vector<TrialConfig> trials =
          sample_trials(space, n_trials, seed);
      write_or_print(trials_out, trials_to_jsonl(trials));
      return 0;
    }
    if (*rank_cmd)
      return run_rank_transfer(results_a, results_b, converged_only);
    if (*best_cmd) return run_select_best(results_path, lower_is_better);
    if (*lemma_cmd) return run_lemma(max_cues, posterior_grid);
    if (*center_cmd) {
      return run_center_baseline(baseline_manifest, baseline_out, sigma);
    }
    if (*splits_cmd) return run_check_splits(split_paths);
  } catch (const PreconditionViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
