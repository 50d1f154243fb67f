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

#include <map>
#include <string>

#include "loopcurate/core/annotation.hpp"
#include "loopcurate/io/json_codec.hpp"
#include "loopcurate/slide/slide.hpp"

namespace loopcurate::detect {

enum class DetectorKind { kBuiltinBlob, kExternal };

std::string_view DetectorKindName(DetectorKind kind);
DetectorKind ParseDetectorKind(std::string_view name);

// Parameter keys.
inline constexpr const char* kIntensityThreshold = "intensity_threshold";
inline constexpr const char* kMinRadius = "min_radius";
inline constexpr const char* kMaxRadius = "max_radius";
inline constexpr const char* kCommand = "command";

// Detections whose circle IoU exceeds this against a better-scored one are
// dropped by the built-in detector.
inline constexpr double kDuplicateIou = 0.8;

struct DetectorSpec {
  DetectorKind kind = DetectorKind::kBuiltinBlob;
  // BUILTIN_BLOB: intensity_threshold (luma, 0-255), min_radius and
  // max_radius (level-0 px). EXTERNAL: command.
  std::map<std::string, std::string> params;
  std::string version_tag;

  static DetectorSpec Builtin(int intensity_threshold = 180, double min_radius = 8.0,
                              double max_radius = 1000.0,
                              std::string version_tag = "builtin-blob");
  // `command` runs through /bin/sh. "{slide}" expands to the slide descriptor
  // path and "{out}" to the XML file it must write; without placeholders both
  // are appended as arguments.
  static DetectorSpec External(std::string command, std::string version_tag);

  bool operator==(const DetectorSpec&) const = default;
};

// Throws DomainError when parameters are missing or malformed for the kind or
// the version tag is empty.
void ValidateDetectorSpec(const DetectorSpec& spec);

io::Json ToJson(const DetectorSpec& spec);
DetectorSpec DetectorSpecFromJson(const io::Json& j);

// Runs the detector over a slide. The result holds MACHINE annotations with
// scores in [0,1] stamped with `loop_index`, slide_id set to the slide's.
//
// BUILTIN_BLOB thresholds the coarsest level's luma, takes 8-connected
// components, fits each component's minimum enclosing circle (radius grown by
// half a pixel to cover pixel extent), scores it as component area over
// circle area clipped to [0,1], scales to level 0, drops circles outside the
// radius range, then suppresses duplicates above kDuplicateIou. Geometry is
// rounded to 1e-4 px. Deterministic.
//
// EXTERNAL failures (nonzero exit, missing or invalid XML) throw
// DetectorError.
AnnotationSet Detect(const slide::SlideHandle& slide, const DetectorSpec& spec, int loop_index = 0);

}  // namespace loopcurate::detect
