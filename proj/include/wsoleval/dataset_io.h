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

#ifndef WSOLEVAL_DATASET_IO_H_
#define WSOLEVAL_DATASET_IO_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wsoleval/geometry.h"

namespace wsoleval {

enum class Split { kTrainWeakSup, kTrainFullSup, kTest };

Split split_from_string(const std::string& name);
std::string to_string(Split split);

struct BoxAnnotation {
  std::vector<BoundingBox> boxes;
};

// Mask files are read and checked while loading the manifest; the decoded
// masks are kept so evaluation needs no further mask I/O.
struct MaskAnnotation {
  std::filesystem::path mask_path;
  std::optional<std::filesystem::path> ignore_path;
  BinaryMask mask;
  std::optional<BinaryMask> ignore;
};

struct ManifestEntry {
  std::string image_id;
  int width;
  int height;
  std::variant<BoxAnnotation, MaskAnnotation> annotation;

  bool has_boxes() const {
    return std::holds_alternative<BoxAnnotation>(annotation);
  }
};

// Line-oriented manifest (JSON Lines). The first record is a header naming
// the split, every later line one image:
//
//   {"split": "test"}
//   {"image_id": "a", "width": 64, "height": 48, "boxes": [[0, 0, 10, 12]]}
//   {"image_id": "b", "width": 64, "height": 48, "mask": "masks/b.png",
//    "ignore": "ignore/b.png"}
//
// Boxes are half-open [x0, y0, x1, y1]. Mask paths are relative to the
// manifest's directory. Blank lines and lines starting with '#' are skipped.
struct SplitManifest {
  Split split;
  std::vector<ManifestEntry> entries;
};

// Throws ParseError naming source:line for malformed content, duplicate
// ids, boxes outside the frame, and missing or inconsistent mask files.
SplitManifest parse_manifest(std::string_view text,
                             const std::filesystem::path& base_dir,
                             const std::string& source_name);
SplitManifest load_manifest(const std::filesystem::path& path);

struct SplitOverlap {
  std::string image_id;
  std::vector<Split> splits;
};

// Image ids present in more than one split, sorted by id. Empty means the
// splits are disjoint.
std::vector<SplitOverlap> check_disjoint(
    std::span<const SplitManifest> manifests);

// Raw score map: "WSLM", version byte 1, three zero bytes, uint32 LE height,
// uint32 LE width, then height * width float32 LE values in row-major order.
// Values are narrowed to float32 on write.
std::vector<std::uint8_t> encode_scoremap_raw(const ScoreMap& map);
ScoreMap decode_scoremap_raw(std::span<const std::uint8_t> bytes,
                             const std::string& source_name);
void write_scoremap_raw(const std::filesystem::path& path, const ScoreMap& map);

// Reads a raw score map or an 8-bit grayscale PNG/PGM (value / 255),
// detected by magic bytes.
ScoreMap read_scoremap(const std::filesystem::path& path);
// As read_scoremap, but the stored size must equal the expected one.
ScoreMap load_scoremap(const std::filesystem::path& path, int expected_height,
                       int expected_width);

struct Gray8Image {
  int height;
  int width;
  std::vector<std::uint8_t> pixels;
};

Gray8Image read_gray8(const std::filesystem::path& path);
void write_gray8_png(const std::filesystem::path& path, const Gray8Image& img);
void write_gray8_pgm(const std::filesystem::path& path, const Gray8Image& img);

// 8-bit mask: 255 = set, 0 = clear; any other value is rejected.
BinaryMask read_mask(const std::filesystem::path& path);
void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask);

// Looks for <id>.wsm, then <id>.png, then <id>.pgm inside dir.
std::optional<std::filesystem::path> resolve_scoremap(
    const std::filesystem::path& dir, const std::string& image_id);

}  // namespace wsoleval

#endif  // WSOLEVAL_DATASET_IO_H_
