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

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "wsoleval/errors.h"

namespace wsoleval {
namespace fs = std::filesystem;

namespace {

constexpr char kRawMagic[4] = {'W', 'S', 'L', 'M'};
constexpr std::uint8_t kRawVersion = 1;
constexpr std::size_t kRawHeaderSize = 16;

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InvalidInput("write failed for '" + path.string() + "'");
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

bool has_prefix(std::span<const std::uint8_t> bytes, std::string_view prefix) {
  return bytes.size() >= prefix.size() &&
         std::memcmp(bytes.data(), prefix.data(), prefix.size()) == 0;
}

const std::string_view kPngSignature("\x89PNG\r\n\x1a\n", 8);

Gray8Image decode_png(std::span<const std::uint8_t> bytes,
                      const std::string& name) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw ParseError(name + ": " + image.message);
  }
  image.format = PNG_FORMAT_GRAY;
  Gray8Image out{static_cast<int>(image.height), static_cast<int>(image.width),
                 std::vector<std::uint8_t>(PNG_IMAGE_SIZE(image))};
  if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw ParseError(name + ": " + message);
  }
  return out;
}

// Binary PGM (P5) with maxval 255.
Gray8Image decode_pgm(std::span<const std::uint8_t> bytes,
                      const std::string& name) {
  std::size_t pos = 2;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&] {
    skip_space();
    if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
      throw ParseError(name + ": malformed PGM header");
    }
    long v = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      v = v * 10 + (bytes[pos++] - '0');
      if (v > (1L << 30))
        throw ParseError(name + ": PGM header value too large");
    }
    return v;
  };
  const long width = read_int();
  const long height = read_int();
  const long maxval = read_int();
  if (maxval != 255) throw ParseError(name + ": only 8-bit PGM is supported");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw ParseError(name + ": malformed PGM header");
  }
  ++pos;
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (width <= 0 || height <= 0 || bytes.size() - pos != n) {
    throw ParseError(name + ": PGM pixel data does not match its header");
  }
  return {static_cast<int>(height), static_cast<int>(width),
          std::vector<std::uint8_t>(bytes.begin() + pos, bytes.end())};
}

Gray8Image decode_gray8(std::span<const std::uint8_t> bytes,
                        const std::string& name) {
  if (has_prefix(bytes, kPngSignature)) return decode_png(bytes, name);
  if (has_prefix(bytes, "P5")) return decode_pgm(bytes, name);
  throw ParseError(name + ": not a PNG or binary PGM image");
}

std::string size_string(int h, int w) {
  return std::to_string(h) + "x" + std::to_string(w);
}

}  // namespace

Split split_from_string(const std::string& name) {
  if (name == "train-weaksup") return Split::kTrainWeakSup;
  if (name == "train-fullsup") return Split::kTrainFullSup;
  if (name == "test") return Split::kTest;
  throw InvalidInput("unknown split '" + name +
                     "' (expected train-weaksup, train-fullsup or test)");
}

std::string to_string(Split split) {
  switch (split) {
    case Split::kTrainWeakSup:
      return "train-weaksup";
    case Split::kTrainFullSup:
      return "train-fullsup";
    case Split::kTest:
      return "test";
  }
  return "?";
}

std::vector<std::uint8_t> encode_scoremap_raw(const ScoreMap& map) {
  std::vector<std::uint8_t> out(kRawMagic, kRawMagic + 4);
  out.push_back(kRawVersion);
  out.insert(out.end(), 3, 0);
  put_u32(out, static_cast<std::uint32_t>(map.height()));
  put_u32(out, static_cast<std::uint32_t>(map.width()));
  out.reserve(out.size() + 4 * map.size());
  for (double v : map.values()) {
    put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  return out;
}

ScoreMap decode_scoremap_raw(std::span<const std::uint8_t> bytes,
                             const std::string& source_name) {
  if (!has_prefix(bytes, std::string_view(kRawMagic, 4))) {
    throw ParseError(source_name + ": bad magic (expected WSLM)");
  }
  if (bytes.size() < kRawHeaderSize) {
    throw ParseError(source_name + ": truncated header");
  }
  if (bytes[4] != kRawVersion) {
    throw ParseError(source_name + ": unsupported version " +
                     std::to_string(bytes[4]));
  }
  if (bytes[5] || bytes[6] || bytes[7]) {
    throw ParseError(source_name + ": non-zero header padding");
  }
  const std::uint32_t h = get_u32(bytes.data() + 8);
  const std::uint32_t w = get_u32(bytes.data() + 12);
  if (h == 0 || w == 0 || h > (1u << 20) || w > (1u << 20)) {
    throw ParseError(source_name + ": bad dimensions " + std::to_string(h) +
                     "x" + std::to_string(w));
  }
  const std::size_t n = static_cast<std::size_t>(h) * w;
  if (bytes.size() != kRawHeaderSize + 4 * n) {
    throw ParseError(source_name + ": expected " + std::to_string(n) +
                     " values for " + std::to_string(h) + "x" +
                     std::to_string(w));
  }
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    const float f =
        std::bit_cast<float>(get_u32(bytes.data() + kRawHeaderSize + 4 * i));
    if (!std::isfinite(f)) {
      throw ParseError(source_name + ": non-finite value at index " +
                       std::to_string(i));
    }
    values[i] = f;
  }
  return ScoreMap(static_cast<int>(h), static_cast<int>(w), std::move(values));
}

void write_scoremap_raw(const fs::path& path, const ScoreMap& map) {
  write_file(path, encode_scoremap_raw(map));
}

ScoreMap read_scoremap(const fs::path& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  const std::string name = path.string();
  if (has_prefix(bytes, std::string_view(kRawMagic, 4))) {
    return decode_scoremap_raw(bytes, name);
  }
  if (has_prefix(bytes, kPngSignature) || has_prefix(bytes, "P5")) {
    const Gray8Image img = decode_gray8(bytes, name);
    std::vector<double> values(img.pixels.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      values[i] = img.pixels[i] / 255.0;
    }
    return ScoreMap(img.height, img.width, std::move(values));
  }
  throw ParseError(name + ": unrecognized score map format (bad magic)");
}

ScoreMap load_scoremap(const fs::path& path, int expected_height,
                       int expected_width) {
  ScoreMap map = read_scoremap(path);
  if (map.height() != expected_height || map.width() != expected_width) {
    throw InvalidInput(path.string() + ": score map is " +
                       size_string(map.height(), map.width()) +
                       " but the manifest expects " +
                       size_string(expected_height, expected_width));
  }
  return map;
}

Gray8Image read_gray8(const fs::path& path) {
  return decode_gray8(read_file(path), path.string());
}

void write_gray8_png(const fs::path& path, const Gray8Image& img) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, img.pixels.data(), 0,
                               nullptr)) {
    throw InvalidInput("cannot write PNG '" + path.string() +
                       "': " + image.message);
  }
}

void write_gray8_pgm(const fs::path& path, const Gray8Image& img) {
  const std::string header = "P5\n" + std::to_string(img.width) + " " +
                             std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  bytes.insert(bytes.end(), img.pixels.begin(), img.pixels.end());
  write_file(path, bytes);
}

BinaryMask read_mask(const fs::path& path) {
  const Gray8Image img = read_gray8(path);
  std::vector<std::uint8_t> values(img.pixels.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint8_t p = img.pixels[i];
    if (p != 0 && p != 255) {
      throw ParseError(path.string() + ": mask pixel " + std::to_string(i) +
                       " has value " + std::to_string(p) +
                       " (expected 0 or 255)");
    }
    values[i] = p ? 1 : 0;
  }
  return BinaryMask(img.height, img.width, std::move(values));
}

void write_mask_png(const fs::path& path, const BinaryMask& mask) {
  Gray8Image img{mask.height(), mask.width(), {}};
  img.pixels.reserve(mask.size());
  for (std::uint8_t v : mask.values()) img.pixels.push_back(v ? 255 : 0);
  write_gray8_png(path, img);
}

std::optional<fs::path> resolve_scoremap(const fs::path& dir,
                                         const std::string& image_id) {
  for (const char* ext : {".wsm", ".png", ".pgm"}) {
    fs::path candidate = dir / (image_id + ext);
    if (fs::is_regular_file(candidate)) return candidate;
  }
  return std::nullopt;
}

SplitManifest parse_manifest(std::string_view text, const fs::path& base_dir,
                             const std::string& source_name) {
  using nlohmann::json;
  std::optional<Split> split;
  std::vector<ManifestEntry> entries;
  std::set<std::string> ids;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;

    const std::string where = source_name + ":" + std::to_string(line_no);
    auto fail = [&](const std::string& what) -> void {
      throw ParseError(where + ": " + what);
    };
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("expected a JSON object");

    if (!split) {
      if (j.size() != 1 || !j.contains("split") || !j["split"].is_string()) {
        fail("first record must be a header like {\"split\": \"test\"}");
      }
      try {
        split = split_from_string(j["split"].get<std::string>());
      } catch (const InvalidInput& e) {
        fail(e.what());
      }
      continue;
    }

    for (const auto& item : j.items()) {
      static const std::set<std::string> known = {
          "image_id", "width", "height", "boxes", "mask", "ignore"};
      if (!known.count(item.key())) fail("unknown field '" + item.key() + "'");
    }
    if (!j.contains("image_id") || !j["image_id"].is_string() ||
        j["image_id"].get<std::string>().empty()) {
      fail("missing or empty image_id");
    }
    const std::string id = j["image_id"].get<std::string>();
    auto dim = [&](const char* key) {
      if (!j.contains(key) || !j[key].is_number_integer() ||
          j[key].get<std::int64_t>() <= 0 ||
          j[key].get<std::int64_t>() > (1 << 20)) {
        fail(std::string("'") + key + "' must be a positive integer");
      }
      return static_cast<int>(j[key].get<std::int64_t>());
    };
    const int width = dim("width");
    const int height = dim("height");
    if (!ids.insert(id).second) fail("duplicate image_id '" + id + "'");

    const bool has_boxes = j.contains("boxes");
    const bool has_mask = j.contains("mask");
    if (has_boxes == has_mask) fail("entry needs exactly one of boxes or mask");
    if (has_boxes && j.contains("ignore")) {
      fail("ignore masks apply to mask entries only");
    }

    if (has_boxes) {
      const json& jb = j["boxes"];
      if (!jb.is_array() || jb.empty()) fail("boxes must be a non-empty list");
      BoxAnnotation ann;
      for (const json& b : jb) {
        if (!b.is_array() || b.size() != 4 ||
            !std::all_of(b.begin(), b.end(),
                         [](const json& v) { return v.is_number_integer(); })) {
          fail("malformed box " + b.dump() + " (expected [x0, y0, x1, y1])");
        }
        const auto c = b.get<std::vector<std::int64_t>>();
        if (std::any_of(
                c.begin(), c.end(),
                [](std::int64_t v) { return v < 0 || v > (1 << 20); }) ||
            c[0] >= c[2] || c[1] >= c[3]) {
          fail("malformed box " + b.dump() + " for image '" + id + "'");
        }
        BoundingBox box(static_cast<int>(c[0]), static_cast<int>(c[1]),
                        static_cast<int>(c[2]), static_cast<int>(c[3]));
        if (!box.fits(height, width)) {
          fail("box " + b.dump() + " exceeds the " + std::to_string(width) +
               "x" + std::to_string(height) + " frame of '" + id + "'");
        }
        ann.boxes.push_back(box);
      }
      entries.push_back({id, width, height, std::move(ann)});
      continue;
    }

    auto load = [&](const char* key) -> std::pair<fs::path, BinaryMask> {
      if (!j[key].is_string())
        fail(std::string("'") + key + "' must be a path");
      const fs::path path = base_dir / j[key].get<std::string>();
      if (!fs::is_regular_file(path)) {
        fail(std::string(key) + " file '" + path.string() + "' not found");
      }
      try {
        BinaryMask m = read_mask(path);
        if (m.height() != height || m.width() != width) {
          fail(std::string(key) + " '" + path.string() + "' is " +
               size_string(m.height(), m.width()) + ", expected " +
               size_string(height, width));
        }
        return {path, std::move(m)};
      } catch (const ParseError&) {
        throw;
      } catch (const InvalidInput& e) {
        throw ParseError(where + ": " + e.what());
      }
    };
    auto [mask_path, mask] = load("mask");
    MaskAnnotation ann{mask_path, std::nullopt, std::move(mask), std::nullopt};
    if (j.contains("ignore")) {
      auto [ignore_path, ignore] = load("ignore");
      for (std::size_t i = 0; i < ignore.size(); ++i) {
        if (ignore.values()[i] && ann.mask.values()[i]) {
          fail("ignore region of '" + id + "' overlaps its foreground");
        }
      }
      ann.ignore_path = ignore_path;
      ann.ignore = std::move(ignore);
    }
    entries.push_back({id, width, height, std::move(ann)});
  }
  if (!split) throw ParseError(source_name + ": missing split header");
  return {*split, std::move(entries)};
}

SplitManifest load_manifest(const fs::path& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  const std::string text(bytes.begin(), bytes.end());
  return parse_manifest(text, path.parent_path(), path.string());
}

std::vector<SplitOverlap> check_disjoint(
    std::span<const SplitManifest> manifests) {
  std::map<std::string, std::vector<Split>> seen;
  for (const SplitManifest& m : manifests) {
    for (const ManifestEntry& e : m.entries) {
      seen[e.image_id].push_back(m.split);
    }
  }
  std::vector<SplitOverlap> overlaps;
  for (auto& [id, splits] : seen) {
    if (splits.size() > 1) overlaps.push_back({id, splits});
  }
  return overlaps;
}

}  // namespace wsoleval
