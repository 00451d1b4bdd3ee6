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

#include "wsoleval/dataset_io.h"

#include <gtest/gtest.h>

#include <bit>
#include <fstream>
#include <limits>

#include "test_support.h"
#include "wsoleval/errors.h"

namespace wsoleval {
namespace {

namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& b) {
  std::ofstream(path, std::ios::binary)
      .write(reinterpret_cast<const char*>(b.data()),
             static_cast<std::streamsize>(b.size()));
}

constexpr char kBoxManifest[] =
    "{\"split\": \"test\"}\n"
    "# comment lines are skipped\n"
    "{\"image_id\": \"a\", \"width\": 8, \"height\": 6, "
    "\"boxes\": [[0, 0, 4, 3]]}\n"
    "{\"image_id\": \"b\", \"width\": 10, \"height\": 5, "
    "\"boxes\": [[1, 1, 3, 3], [5, 0, 10, 5]]}\n"
    "{\"image_id\": \"c\", \"width\": 3, \"height\": 4, "
    "\"boxes\": [[0, 0, 3, 4]]}\n";

TEST(ManifestTest, ParsesBoxEntries) {
  const SplitManifest m = parse_manifest(kBoxManifest, ".", "m.jsonl");
  EXPECT_EQ(m.split, Split::kTest);
  ASSERT_EQ(m.entries.size(), 3u);
  EXPECT_EQ(m.entries[0].width, 8);
  EXPECT_EQ(m.entries[0].height, 6);
  EXPECT_EQ(m.entries[1].width, 10);
  EXPECT_EQ(m.entries[2].height, 4);
  const auto& boxes = std::get<BoxAnnotation>(m.entries[1].annotation).boxes;
  ASSERT_EQ(boxes.size(), 2u);
  EXPECT_EQ(boxes[1], BoundingBox(5, 0, 10, 5));
}

TEST(ManifestTest, RejectsMalformedEntries) {
  const std::string header = "{\"split\": \"test\"}\n";
  const std::string a =
      "{\"image_id\": \"a\", \"width\": 4, \"height\": 4, "
      "\"boxes\": [[0, 0, 2, 2]]}\n";
  EXPECT_THROW(parse_manifest(header + a + a, ".", "m"), ParseError);
  EXPECT_THROW(parse_manifest(a, ".", "m"), ParseError);
  EXPECT_THROW(parse_manifest("{\"split\": \"val\"}\n" + a, ".", "m"),
               InvalidInput);
  EXPECT_THROW(
      parse_manifest(header +
                         "{\"image_id\": \"a\", \"width\": 4, \"height\": 4, "
                         "\"boxes\": [[0, 0, 5, 2]]}\n",
                     ".", "m"),
      ParseError);
  EXPECT_THROW(
      parse_manifest(header +
                         "{\"image_id\": \"a\", \"width\": 4, \"height\": 4, "
                         "\"boxes\": [[0, 0, 2, 2]], \"colour\": 1}\n",
                     ".", "m"),
      ParseError);
  try {
    parse_manifest(header + a + "{not json\n", ".", "m.jsonl");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("m.jsonl:3"), std::string::npos)
        << e.what();
  }
}

TEST(ManifestTest, MaskEntriesLoadAndValidate) {
  testing::TempDir dir("manifest");
  write_mask_png(dir.path() / "a_mask.png",
                 BinaryMask(2, 3, {1, 0, 0, 1, 0, 0}));
  write_mask_png(dir.path() / "a_ignore.png",
                 BinaryMask(2, 3, {0, 0, 1, 0, 0, 0}));
  write_mask_png(dir.path() / "bad_ignore.png",
                 BinaryMask(2, 3, {1, 0, 0, 0, 0, 0}));
  const std::string header = "{\"split\": \"train-fullsup\"}\n";
  const SplitManifest m = parse_manifest(
      header +
          "{\"image_id\": \"a\", \"width\": 3, \"height\": 2, "
          "\"mask\": \"a_mask.png\", \"ignore\": \"a_ignore.png\"}\n",
      dir.path(), "m");
  ASSERT_EQ(m.entries.size(), 1u);
  const auto& ann = std::get<MaskAnnotation>(m.entries[0].annotation);
  EXPECT_EQ(ann.mask.count(), 2);
  ASSERT_TRUE(ann.ignore.has_value());
  EXPECT_EQ(ann.ignore->count(), 1);

  EXPECT_THROW(
      parse_manifest(header + "{\"image_id\": \"a\", \"width\": 3, "
                              "\"height\": 2, \"mask\": \"missing.png\"}\n",
                     dir.path(), "m"),
      ParseError);
  EXPECT_THROW(
      parse_manifest(header + "{\"image_id\": \"a\", \"width\": 4, "
                              "\"height\": 2, \"mask\": \"a_mask.png\"}\n",
                     dir.path(), "m"),
      ParseError);
  EXPECT_THROW(
      parse_manifest(header +
                         "{\"image_id\": \"a\", \"width\": 3, \"height\": 2, "
                         "\"mask\": \"a_mask.png\", "
                         "\"ignore\": \"bad_ignore.png\"}\n",
                     dir.path(), "m"),
      ParseError);
}

TEST(ManifestTest, NonBinaryMaskIsRejected) {
  testing::TempDir dir("gray");
  write_gray8_png(dir.path() / "m.png", {1, 2, {0, 128}});
  EXPECT_THROW(read_mask(dir.path() / "m.png"), InvalidInput);
}

TEST(CheckDisjointTest, ReportsSharedIds) {
  const SplitManifest test = parse_manifest(kBoxManifest, ".", "t");
  const SplitManifest train = parse_manifest(
      "{\"split\": \"train-fullsup\"}\n"
      "{\"image_id\": \"z\", \"width\": 4, \"height\": 4, "
      "\"boxes\": [[0, 0, 2, 2]]}\n"
      "{\"image_id\": \"b\", \"width\": 4, \"height\": 4, "
      "\"boxes\": [[0, 0, 2, 2]]}\n",
      ".", "f");
  const SplitManifest only_z = parse_manifest(
      "{\"split\": \"train-weaksup\"}\n"
      "{\"image_id\": \"y\", \"width\": 4, \"height\": 4, "
      "\"boxes\": [[0, 0, 2, 2]]}\n",
      ".", "w");
  EXPECT_TRUE(check_disjoint(std::vector<SplitManifest>{test, only_z}).empty());
  const auto overlaps = check_disjoint(std::vector<SplitManifest>{test, train});
  ASSERT_EQ(overlaps.size(), 1u);
  EXPECT_EQ(overlaps[0].image_id, "b");
  EXPECT_EQ(overlaps[0].splits,
            (std::vector<Split>{Split::kTest, Split::kTrainFullSup}));
}

TEST(ScoremapIoTest, RawRoundTripIsBitIdentical) {
  testing::TempDir dir("raw");
  // Values representable in single precision survive exactly.
  const ScoreMap map(2, 3, {0.0, 0.25, -1.5, 1e-3f, 3.0e7, 1.0});
  write_scoremap_raw(dir.path() / "m.wsm", map);
  EXPECT_EQ(read_scoremap(dir.path() / "m.wsm"), map);
  EXPECT_EQ(decode_scoremap_raw(encode_scoremap_raw(map), "mem"), map);
}

TEST(ScoremapIoTest, EightBitImagesScaleBy255) {
  testing::TempDir dir("gray8");
  const Gray8Image img{1, 3, {0, 128, 255}};
  write_gray8_png(dir.path() / "m.png", img);
  write_gray8_pgm(dir.path() / "m.pgm", img);
  for (const char* name : {"m.png", "m.pgm"}) {
    const ScoreMap s = read_scoremap(dir.path() / name);
    EXPECT_EQ(s.values(), (std::vector<double>{0.0, 128.0 / 255.0, 1.0}));
  }
}

TEST(ScoremapIoTest, DimensionMismatchNamesBothSizes) {
  testing::TempDir dir("dims");
  write_scoremap_raw(dir.path() / "m.wsm", ScoreMap(14, 14));
  try {
    load_scoremap(dir.path() / "m.wsm", 224, 200);
    FAIL() << "expected a size error";
  } catch (const InvalidInput& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("14x14"), std::string::npos) << msg;
    EXPECT_NE(msg.find("224x200"), std::string::npos) << msg;
  }
  EXPECT_NO_THROW(load_scoremap(dir.path() / "m.wsm", 14, 14));
}

TEST(ScoremapIoTest, RejectsCorruptFiles) {
  testing::TempDir dir("corrupt");
  write_text(dir.path() / "x.wsm", "JUNKJUNKJUNKJUNK");
  EXPECT_THROW(read_scoremap(dir.path() / "x.wsm"), ParseError);

  std::vector<std::uint8_t> bytes = encode_scoremap_raw(ScoreMap(1, 2));
  bytes.pop_back();
  EXPECT_THROW(decode_scoremap_raw(bytes, "short"), ParseError);

  std::vector<std::uint8_t> nan_bytes = encode_scoremap_raw(ScoreMap(1, 1));
  const std::uint32_t nan_bits =
      std::bit_cast<std::uint32_t>(std::numeric_limits<float>::quiet_NaN());
  for (int i = 0; i < 4; ++i) {
    nan_bytes[nan_bytes.size() - 4 + i] =
        static_cast<std::uint8_t>(nan_bits >> (8 * i));
  }
  write_bytes(dir.path() / "nan.wsm", nan_bytes);
  EXPECT_THROW(read_scoremap(dir.path() / "nan.wsm"), InvalidInput);
  EXPECT_THROW(read_scoremap(dir.path() / "absent.wsm"), InvalidInput);
}

TEST(ScoremapIoTest, ResolvePrefersRawFormat) {
  testing::TempDir dir("resolve");
  EXPECT_FALSE(resolve_scoremap(dir.path(), "a").has_value());
  write_gray8_png(dir.path() / "a.png", {1, 1, {7}});
  EXPECT_EQ(resolve_scoremap(dir.path(), "a")->filename(), "a.png");
  write_scoremap_raw(dir.path() / "a.wsm", ScoreMap(1, 1));
  EXPECT_EQ(resolve_scoremap(dir.path(), "a")->filename(), "a.wsm");
}

}  // namespace
}  // namespace wsoleval
