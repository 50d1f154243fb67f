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
#include "loopcurate/slide/patches.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "loopcurate/core/error.hpp"
#include "loopcurate/io/file_util.hpp"
#include "loopcurate/io/json_codec.hpp"
#include "loopcurate/slide/png.hpp"

namespace loopcurate::slide {

namespace fs = std::filesystem;

PatchRect ComputePatchRect(const Circle& c, double padding_ratio, int slide_width,
                           int slide_height) {
  if (!(padding_ratio >= 0.0) || !std::isfinite(padding_ratio)) {
    throw DomainError("padding ratio must be non-negative");
  }
  ValidateCircle(c);
  const long side = std::max(1L, std::lround(2.0 * c.r * (1.0 + padding_ratio)));
  const long x0 = static_cast<long>(std::floor(c.cx - side / 2.0 + 0.5));
  const long y0 = static_cast<long>(std::floor(c.cy - side / 2.0 + 0.5));
  const long cx0 = std::max(0L, x0), cy0 = std::max(0L, y0);
  const long cx1 = std::min<long>(slide_width, x0 + side);
  const long cy1 = std::min<long>(slide_height, y0 + side);
  if (cx0 >= cx1 || cy0 >= cy1) {
    throw DomainError("patch square lies outside the slide");
  }
  PatchRect rect;
  rect.x = cx0;
  rect.y = cy0;
  rect.width = static_cast<int>(cx1 - cx0);
  rect.height = static_cast<int>(cy1 - cy0);
  rect.clipped = rect.width != side || rect.height != side;
  return rect;
}

std::string PatchFileName(std::string_view slide_id, AnnotationId id) {
  return std::string(slide_id) + "_" + std::to_string(id) + ".png";
}

PatchManifest ExtractPatches(const SlideHandle& slide, const AnnotationSet& set,
                             double padding_ratio, const fs::path& out_dir) {
  if (!(padding_ratio >= 0.0)) throw DomainError("padding ratio must be non-negative");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw IoError("cannot create patch directory " + out_dir.string());
  }

  PatchManifest manifest;
  manifest.slide_id = set.slide_id;
  manifest.level = 0;
  manifest.padding_ratio = padding_ratio;
  std::set<std::string> names;
  for (const auto& a : set.annotations) {
    if (!IsKept(a, set.active_threshold)) continue;
    const PatchRect rect = ComputePatchRect(a.geometry, padding_ratio, slide.width(), slide.height());
    PatchImage patch = ReadRegion(slide, 0, rect.x, rect.y, rect.width, rect.height);
    patch.annotation_id = a.id;

    PatchManifestEntry entry;
    entry.annotation_id = a.id;
    entry.patch_file = PatchFileName(set.slide_id, a.id);
    entry.origin_x = rect.x;
    entry.origin_y = rect.y;
    entry.width = rect.width;
    entry.height = rect.height;
    entry.padding_used = padding_ratio;
    entry.clipped = rect.clipped;
    if (!names.insert(entry.patch_file).second) {
      throw DomainError("duplicate patch file name " + entry.patch_file);
    }
    io::WriteFileAtomic(out_dir / entry.patch_file, EncodePng(patch.pixels));
    manifest.entries.push_back(std::move(entry));
  }
  io::WriteFileAtomic(out_dir / kManifestName, WritePatchManifest(manifest));
  return manifest;
}

std::string WritePatchManifest(const PatchManifest& m) {
  io::Json entries = io::Json::array();
  for (const auto& e : m.entries) {
    entries.push_back({{"annotation_id", e.annotation_id},
                       {"patch_file", e.patch_file},
                       {"origin", {e.origin_x, e.origin_y}},
                       {"size", {e.width, e.height}},
                       {"padding_used", e.padding_used},
                       {"clipped", e.clipped}});
  }
  return io::CanonicalJson({{"slide_id", m.slide_id},
                            {"level", m.level},
                            {"padding_ratio", m.padding_ratio},
                            {"entries", std::move(entries)}});
}

PatchManifest ReadPatchManifest(std::string_view bytes) {
  const io::Json doc = io::ParseJson(bytes);
  PatchManifest m;
  m.slide_id = io::RequireString(doc, "slide_id");
  m.level = static_cast<int>(io::RequireInteger(doc, "level"));
  m.padding_ratio = io::RequireNumber(doc, "padding_ratio");
  const io::Json& entries = io::RequireField(doc, "entries");
  if (!entries.is_array()) throw ValidationError("'entries' must be an array");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const io::Json& e = entries[i];
    try {
      PatchManifestEntry entry;
      entry.annotation_id = static_cast<AnnotationId>(io::RequireInteger(e, "annotation_id"));
      entry.patch_file = io::RequireString(e, "patch_file");
      const io::Json& origin = io::RequireField(e, "origin");
      const io::Json& size = io::RequireField(e, "size");
      if (!origin.is_array() || origin.size() != 2 || !size.is_array() || size.size() != 2) {
        throw ValidationError("origin and size must be [x, y] pairs");
      }
      entry.origin_x = origin[0].get<long>();
      entry.origin_y = origin[1].get<long>();
      entry.width = size[0].get<int>();
      entry.height = size[1].get<int>();
      entry.padding_used = io::RequireNumber(e, "padding_used");
      entry.clipped = io::RequireField(e, "clipped").get<bool>();
      m.entries.push_back(std::move(entry));
    } catch (const ValidationError& err) {
      throw ValidationError(err.message(), SourceLocation::Record(static_cast<int>(i)));
    } catch (const io::Json::exception& err) {
      throw ValidationError(err.what(), SourceLocation::Record(static_cast<int>(i)));
    }
  }
  return m;
}

}  // namespace loopcurate::slide
