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

// Runs the command-line tool and writes on-disk fixtures for it.

#ifndef WSOLEVAL_TESTS_CLI_SUPPORT_H_
#define WSOLEVAL_TESTS_CLI_SUPPORT_H_

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "test_support.h"
#include "wsoleval/dataset_io.h"

namespace wsoleval::testing {

struct CommandResult {
  int exit_code;
  std::string out;
};

inline std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q += c;
    }
  }
  return q + "'";
}

// Runs `binary args` through the shell and captures stdout. With
// merge_stderr, stderr is captured as well; otherwise it is discarded.
inline CommandResult run_command(const std::string& binary,
                                 const std::string& args,
                                 bool merge_stderr = false) {
  const std::string cmd = shell_quote(binary) + " " + args +
                          (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {-1, ""};
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

inline std::string read_file_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline void write_file_text(const std::filesystem::path& path,
                            const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

inline std::string box_entry(const std::string& id, int w, int h,
                             const std::vector<BoundingBox>& boxes) {
  std::string s = "{\"image_id\": \"" + id +
                  "\", \"width\": " + std::to_string(w) +
                  ", \"height\": " + std::to_string(h) + ", \"boxes\": [";
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const BoundingBox& b = boxes[i];
    if (i) s += ", ";
    s += "[" + std::to_string(b.x0()) + ", " + std::to_string(b.y0()) + ", " +
         std::to_string(b.x1()) + ", " + std::to_string(b.y1()) + "]";
  }
  return s + "]}\n";
}

inline std::string mask_entry(const std::string& id, int w, int h,
                              const std::string& mask,
                              const std::string& ignore = "") {
  std::string s =
      "{\"image_id\": \"" + id + "\", \"width\": " + std::to_string(w) +
      ", \"height\": " + std::to_string(h) + ", \"mask\": \"" + mask + "\"";
  if (!ignore.empty()) s += ", \"ignore\": \"" + ignore + "\"";
  return s + "}\n";
}

// Three images whose score maps are 1 exactly inside the ground-truth box.
// Writes manifest.jsonl and maps/<id>.wsm under dir.
inline void write_perfect_blob_fixture(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "maps");
  std::string manifest = "{\"split\": \"test\"}\n";
  const std::vector<std::pair<std::pair<int, int>, BoundingBox>> images = {
      {{12, 10}, BoundingBox(2, 3, 7, 8)},
      {{16, 16}, BoundingBox(0, 0, 16, 5)},
      {{9, 14}, BoundingBox(4, 1, 13, 9)}};
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto [h, w] = images[i].first;
    const BoundingBox& b = images[i].second;
    const std::string id = "img" + std::to_string(i);
    std::vector<double> v(static_cast<std::size_t>(h) * w, 0.0);
    for (int y = b.y0(); y < b.y1(); ++y) {
      for (int x = b.x0(); x < b.x1(); ++x) v[y * w + x] = 1.0;
    }
    write_scoremap_raw(dir / "maps" / (id + ".wsm"), ScoreMap(h, w, v));
    manifest += box_entry(id, w, h, {b});
  }
  write_file_text(dir / "manifest.jsonl", manifest);
}

// The 2x2 map [[0.9, 0.6], [0.4, 0.1]] with mask [[1, 0], [1, 0]].
inline void write_two_by_two_mask_fixture(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "maps");
  write_scoremap_raw(dir / "maps" / "q.wsm",
                     ScoreMap(2, 2, {0.9, 0.6, 0.4, 0.1}));
  write_mask_png(dir / "q_mask.png", BinaryMask(2, 2, {1, 0, 1, 0}));
  write_file_text(
      dir / "manifest.jsonl",
      "{\"split\": \"test\"}\n" + mask_entry("q", 2, 2, "q_mask.png"));
}

// Random box and mask manifests over the same images, with low-resolution
// raw maps that must be resized and calibrated. Writes boxes.jsonl,
// masks.jsonl, masks/ and maps/ under dir.
inline void write_random_fixture(const std::filesystem::path& dir, int n,
                                 std::uint64_t seed) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "maps");
  fs::create_directories(dir / "masks");
  std::mt19937_64 rng(seed);
  std::string boxes = "{\"split\": \"test\"}\n";
  std::string masks = "{\"split\": \"test\"}\n";
  for (int i = 0; i < n; ++i) {
    const std::string id = "r" + std::to_string(i);
    const int h = uniform_int(rng, 20, 40), w = uniform_int(rng, 20, 40);
    const BoxEvalRecord rec = random_blob_record(rng, h, w, id);
    boxes += box_entry(id, w, h, rec.gt_boxes);

    BinaryMask fg(h, w), ignore(h, w);
    const BoundingBox& g = rec.gt_boxes.front();
    for (int y = g.y0(); y < g.y1(); ++y) {
      for (int x = g.x0(); x < g.x1(); ++x) fg.set(y, x, true);
    }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (!fg.at(y, x) && uniform01(rng) < 0.05) ignore.set(y, x, true);
      }
    }
    write_mask_png(dir / "masks" / (id + ".png"), fg);
    write_mask_png(dir / "masks" / (id + "_ignore.png"), ignore);
    masks += mask_entry(id, w, h, "masks/" + id + ".png",
                        "masks/" + id + "_ignore.png");

    const int mh = 14, mw = 14;
    std::vector<double> raw(mh * mw);
    for (int y = 0; y < mh; ++y) {
      for (int x = 0; x < mw; ++x) {
        raw[y * mw + x] = 4.0 * rec.score_map.at(y * h / mh, x * w / mw) - 1.0 +
                          0.1 * uniform01(rng);
      }
    }
    write_scoremap_raw(dir / "maps" / (id + ".wsm"), ScoreMap(mh, mw, raw));
  }
  write_file_text(dir / "boxes.jsonl", boxes);
  write_file_text(dir / "masks.jsonl", masks);
}

}  // namespace wsoleval::testing

#endif  // WSOLEVAL_TESTS_CLI_SUPPORT_H_
