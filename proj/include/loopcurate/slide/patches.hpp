// Copyright 2026 The LoopCurate Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "loopcurate/core/annotation.hpp"
#include "loopcurate/slide/slide.hpp"

namespace loopcurate::slide {

inline constexpr double kDefaultPaddingRatio = 0.2;
inline constexpr const char* kManifestName = "manifest.json";

struct PatchRect {
  long x = 0;  // level-0 pixels
  long y = 0;
  int width = 0;
  int height = 0;
  bool clipped = false;  // true when the square was cut by the slide border

  bool operator==(const PatchRect&) const = default;
};

// The square of side round(2 r (1 + padding_ratio)) (at least 1 px) centered
// on the circle, top-left at round(center - side/2), intersected with the
// slide extent. Throws DomainError when padding_ratio < 0 or the square
// misses the slide.
PatchRect ComputePatchRect(const Circle& c, double padding_ratio, int slide_width,
                           int slide_height);

struct PatchManifestEntry {
  AnnotationId annotation_id = 0;
  std::string patch_file;  // relative to the manifest directory
  long origin_x = 0;
  long origin_y = 0;
  int width = 0;
  int height = 0;
  double padding_used = 0.0;
  bool clipped = false;

  bool operator==(const PatchManifestEntry&) const = default;
};

struct PatchManifest {
  std::string slide_id;
  int level = 0;
  double padding_ratio = kDefaultPaddingRatio;
  std::vector<PatchManifestEntry> entries;

  bool operator==(const PatchManifest&) const = default;
};

std::string PatchFileName(std::string_view slide_id, AnnotationId id);

// For every annotation kept at set.active_threshold, reads its patch at
// level 0 and writes <slide_id>_<annotation_id>.png into out_dir, then
// writes manifest.json (canonical JSON) beside the patches. Re-running
// overwrites with identical bytes. Throws IoError when out_dir cannot be
// written.
PatchManifest ExtractPatches(const SlideHandle& slide, const AnnotationSet& set,
                             double padding_ratio, const std::filesystem::path& out_dir);

std::string WritePatchManifest(const PatchManifest& manifest);
PatchManifest ReadPatchManifest(std::string_view bytes);

}  // namespace loopcurate::slide
