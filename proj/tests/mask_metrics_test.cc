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

#include "wsoleval/mask_metrics.h"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "test_support.h"
#include "wsoleval/errors.h"

namespace wsoleval {
namespace {

MaskEvalRecord two_by_two() {
  return {"2x2", ScoreMap(2, 2, {0.9, 0.6, 0.4, 0.1}),
          BinaryMask(2, 2, {1, 0, 1, 0}), std::nullopt};
}

ThresholdGrid exact_grid(std::span<const MaskEvalRecord> records) {
  std::vector<const ScoreMap*> maps;
  for (const MaskEvalRecord& r : records) maps.push_back(&r.score_map);
  return ThresholdGrid::exact(maps);
}

MaskEvalRecord random_record(std::mt19937_64& rng, int h, int w,
                             bool with_ignore) {
  std::vector<double> v(static_cast<std::size_t>(h) * w);
  // Coarse levels so ties across pixels occur.
  for (double& x : v) x = testing::uniform_int(rng, 0, 20) / 20.0;
  BinaryMask gt = testing::random_mask(rng, h, w, 0.3);
  gt.set(0, 0, true);
  std::optional<BinaryMask> ignore;
  if (with_ignore) {
    BinaryMask m = testing::random_mask(rng, h, w, 0.2);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (gt.at(y, x)) m.set(y, x, false);
      }
    }
    ignore = std::move(m);
  }
  return {"r", ScoreMap(h, w, std::move(v)), std::move(gt), std::move(ignore)};
}

TEST(PxPrCurveTest, PerfectSeparation) {
  const std::vector<MaskEvalRecord> records = {
      {"p", ScoreMap(2, 3, {1, 1, 0, 0, 0, 1}),
       BinaryMask(2, 3, {1, 1, 0, 0, 0, 1}), std::nullopt}};
  const PrCurve c = px_pr_curve(records, ThresholdGrid::uniform(0.1));
  const std::size_t t = c.thresholds.last_at_or_below(0.5);
  EXPECT_EQ(c.precision[t], 1.0);
  EXPECT_EQ(c.recall[t], 1.0);
  EXPECT_EQ(c.ap, 1.0);
}

TEST(PxPrCurveTest, TauZeroPredictsEverything) {
  const std::vector<MaskEvalRecord> records = {two_by_two()};
  const PrCurve c = px_pr_curve(records, ThresholdGrid::uniform(0.1));
  EXPECT_EQ(c.thresholds[0], 0.0);
  EXPECT_EQ(c.recall[0], 1.0);
  EXPECT_EQ(c.precision[0], 0.5);
}

TEST(PxPrCurveTest, TwoByTwoExample) {
  const std::vector<MaskEvalRecord> records = {two_by_two()};
  const PrCurve grid = px_pr_curve(records, ThresholdGrid::uniform(0.1));
  const std::size_t t = grid.thresholds.last_at_or_below(0.5);
  EXPECT_EQ(grid.precision[t], 0.5);
  EXPECT_EQ(grid.recall[t], 0.5);

  const double oracle =
      testing::pxap_sort_oracle(testing::non_ignored_pixels(records));
  EXPECT_DOUBLE_EQ(oracle, 5.0 / 6.0);
  const PrCurve exact = px_pr_curve(records, exact_grid(records));
  EXPECT_NEAR(exact.ap, oracle, 1e-12);
  EXPECT_EQ(px_ap(exact), exact.ap);
}

TEST(PxApTest, ConstantMapGivesForegroundFraction) {
  const std::vector<MaskEvalRecord> records = {
      {"c", ScoreMap(3, 4, 0.0),
       BinaryMask(3, 4, {1, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0}), std::nullopt}};
  const double oracle =
      testing::pxap_sort_oracle(testing::non_ignored_pixels(records));
  EXPECT_DOUBLE_EQ(oracle, 3.0 / 12.0);
  EXPECT_NEAR(px_pr_curve(records, exact_grid(records)).ap, oracle, 1e-12);
  EXPECT_NEAR(px_pr_curve(records, ThresholdGrid::uniform()).ap, oracle, 1e-12);
}

TEST(PxApTest, MatchesSortingOracleAndGridConverges) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<MaskEvalRecord> records;
    const int n = testing::uniform_int(rng, 1, 3);
    for (int i = 0; i < n; ++i) {
      records.push_back(random_record(rng, 6, 7, trial % 2 == 0));
    }
    const double oracle =
        testing::pxap_sort_oracle(testing::non_ignored_pixels(records));
    const double exact = px_pr_curve(records, exact_grid(records)).ap;
    EXPECT_NEAR(exact, oracle, 1e-12);
    const double grid = px_pr_curve(records, ThresholdGrid::uniform()).ap;
    EXPECT_LE(std::abs(grid - exact), 2e-3);
  }
}

TEST(PxPrCurveTest, RecallNonIncreasingAndApBounded) {
  std::mt19937_64 rng(37);
  const std::vector<MaskEvalRecord> records = {random_record(rng, 9, 9, true)};
  const PrCurve c = px_pr_curve(records, ThresholdGrid::uniform(0.01));
  for (std::size_t t = 1; t < c.recall.size(); ++t) {
    EXPECT_LE(c.recall[t], c.recall[t - 1]);
  }
  EXPECT_EQ(c.recall[0], 1.0);
  EXPECT_GE(c.ap, 0.0);
  EXPECT_LE(c.ap, 1.0);
}

TEST(ApplyIgnoreTest, OnlyUnignoredForegroundPixelLeft) {
  std::vector<std::uint8_t> ignore(9, 1);
  ignore[4] = 0;
  std::vector<std::uint8_t> gt(9, 0);
  gt[4] = 1;
  std::vector<double> scores(9, 0.7);
  scores[4] = 1.0;
  const std::vector<MaskEvalRecord> records = {{"one", ScoreMap(3, 3, scores),
                                                BinaryMask(3, 3, gt),
                                                BinaryMask(3, 3, ignore)}};
  const PixelSet kept = apply_ignore(records[0]);
  ASSERT_EQ(kept.scores.size(), 1u);
  const PrCurve c = px_pr_curve(records, ThresholdGrid::uniform(0.1));
  const std::size_t t = c.thresholds.last_at_or_below(0.5);
  EXPECT_EQ(c.precision[t], 1.0);
  EXPECT_EQ(c.recall[t], 1.0);
}

TEST(ApplyIgnoreTest, GroupOfRegionFixture) {
  // Foreground object in the top-left quadrant; a group-of box covers the
  // bottom-right quadrant and is ignored.
  const MaskEvalRecord record{"group-of",
                              ScoreMap(4, 4,
                                       {0.9, 0.8, 0.1, 0.2,    //
                                        0.7, 0.6, 0.3, 0.0,    //
                                        0.5, 0.4, 0.95, 0.85,  //
                                        0.2, 0.1, 0.75, 0.65}),
                              BinaryMask(4, 4,
                                         {1, 1, 0, 0,  //
                                          1, 1, 0, 0,  //
                                          0, 0, 0, 0,  //
                                          0, 0, 0, 0}),
                              BinaryMask(4, 4,
                                         {0, 0, 0, 0,  //
                                          0, 0, 0, 0,  //
                                          0, 0, 1, 1,  //
                                          0, 0, 1, 1})};
  const ThresholdGrid grid =
      ThresholdGrid::exact_from_values({0.0, 0.35, 0.5, 0.9});
  const PixelCounts counts = count_pixels(apply_ignore(record), grid);

  // Hand count over the 12 non-ignored pixels.
  EXPECT_EQ(counts.total, 12);
  EXPECT_EQ(counts.foreground, 4);
  EXPECT_EQ(counts.predicted, (std::vector<std::int64_t>{12, 6, 5, 1}));
  EXPECT_EQ(counts.true_positive, (std::vector<std::int64_t>{4, 4, 4, 1}));

  // Independent recount from the raw grids.
  const std::vector<MaskEvalRecord> records = {record};
  const auto pixels = testing::non_ignored_pixels(records);
  for (std::size_t t = 0; t < grid.size(); ++t) {
    std::int64_t tp = 0, pred = 0;
    for (const auto& [s, label] : pixels) {
      if (s >= grid[t]) {
        ++pred;
        tp += label;
      }
    }
    EXPECT_EQ(counts.predicted[t], pred);
    EXPECT_EQ(counts.true_positive[t], tp);
  }
  // Every foreground pixel outranks every kept background pixel.
  EXPECT_EQ(px_pr_curve(records, exact_grid(records)).ap, 1.0);
}

TEST(ApplyIgnoreTest, ScoresAtIgnoredPixelsDoNotMatter) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const MaskEvalRecord base = random_record(rng, 8, 8, true);
    std::vector<double> perturbed = base.score_map.values();
    for (std::size_t i = 0; i < perturbed.size(); ++i) {
      if (base.ignore_mask->values()[i]) perturbed[i] = testing::uniform01(rng);
    }
    const std::vector<MaskEvalRecord> a = {base};
    const std::vector<MaskEvalRecord> b = {
        {"r", ScoreMap(8, 8, perturbed), base.gt_mask, base.ignore_mask}};
    const ThresholdGrid grid = ThresholdGrid::uniform();
    const PrCurve ca = px_pr_curve(a, grid), cb = px_pr_curve(b, grid);
    EXPECT_EQ(ca.precision, cb.precision);
    EXPECT_EQ(ca.recall, cb.recall);
    EXPECT_EQ(ca.ap, cb.ap);
  }
}

TEST(PxPrCurveTest, PooledCountingEqualsPixelUnion) {
  std::mt19937_64 rng(43);
  const MaskEvalRecord a = random_record(rng, 4, 5, false);
  const MaskEvalRecord b = random_record(rng, 4, 5, false);
  std::vector<double> scores = a.score_map.values();
  scores.insert(scores.end(), b.score_map.values().begin(),
                b.score_map.values().end());
  std::vector<std::uint8_t> labels = a.gt_mask.values();
  labels.insert(labels.end(), b.gt_mask.values().begin(),
                b.gt_mask.values().end());
  const std::vector<MaskEvalRecord> joint = {a, b};
  const std::vector<MaskEvalRecord> stacked = {
      {"u", ScoreMap(8, 5, scores), BinaryMask(8, 5, labels), std::nullopt}};
  const ThresholdGrid grid = ThresholdGrid::uniform(0.01);
  const PrCurve cj = px_pr_curve(joint, grid, {4});
  const PrCurve cs = px_pr_curve(stacked, grid);
  EXPECT_EQ(cj.precision, cs.precision);
  EXPECT_EQ(cj.recall, cs.recall);
  EXPECT_EQ(cj.ap, cs.ap);
}

TEST(PxPrCurveTest, Errors) {
  const ThresholdGrid grid = ThresholdGrid::uniform(0.1);
  EXPECT_THROW(px_pr_curve(std::vector<MaskEvalRecord>{}, grid), InvalidInput);
  const std::vector<MaskEvalRecord> no_fg = {
      {"z", ScoreMap(2, 2, 0.5), BinaryMask(2, 2), std::nullopt}};
  EXPECT_THROW(px_pr_curve(no_fg, grid), InvalidInput);
  const std::vector<MaskEvalRecord> overlap = {{"o", ScoreMap(1, 2, 0.5),
                                                BinaryMask(1, 2, {1, 0}),
                                                BinaryMask(1, 2, {1, 0})}};
  EXPECT_THROW(px_pr_curve(overlap, grid), InvalidInput);
  const std::vector<MaskEvalRecord> mismatched = {
      {"m", ScoreMap(2, 2, 0.5), BinaryMask(1, 2, {1, 0}), std::nullopt}};
  EXPECT_THROW(px_pr_curve(mismatched, grid), InvalidInput);
  const std::vector<MaskEvalRecord> uncalibrated = {
      {"u", ScoreMap(1, 2, {0.0, 2.0}), BinaryMask(1, 2, {1, 0}),
       std::nullopt}};
  EXPECT_THROW(px_pr_curve(uncalibrated, grid), PreconditionViolation);
}

TEST(PrCsvTest, DescendingTauWithApFooter) {
  const std::vector<MaskEvalRecord> records = {two_by_two()};
  const PrCurve c = px_pr_curve(records, exact_grid(records));
  std::ostringstream os;
  write_pr_csv(os, c);
  EXPECT_EQ(os.str(),
            "tau,precision,recall\n"
            "0.900000,1.000000,0.500000\n"
            "0.600000,0.500000,0.500000\n"
            "0.400000,0.666667,1.000000\n"
            "0.100000,0.500000,1.000000\n"
            "#pxap,0.833333\n");
}

}  // namespace
}  // namespace wsoleval
