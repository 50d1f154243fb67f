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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "loopcurate/core/annotation.hpp"
#include "loopcurate/core/timestamp.hpp"
#include "loopcurate/io/class_config.hpp"

namespace loopcurate::io {

// The class assigned to one extracted patch.
struct PatchLabelRecord {
  std::string patch_file;  // relative to the patch directory
  std::string slide_id;
  AnnotationId annotation_id = 0;
  std::string class_code;
  Timestamp labeled_at;
  std::string labeler;

  bool operator==(const PatchLabelRecord&) const = default;
};

// Canonical JSON array, keys sorted (annotation_id, class_code, labeled_at,
// labeler, patch_file, slide_id), two-space indent, trailing newline.
// Throws ValidationError (with the record index) when patch_file is empty or
// class_code is not in `config`.
std::string WritePatchLabels(std::span<const PatchLabelRecord> records, const ClassConfig& config);

// Throws ParseError for malformed JSON, ValidationError with the record
// index for missing fields or codes not in `config`.
std::vector<PatchLabelRecord> ReadPatchLabels(std::string_view bytes, const ClassConfig& config);

// Records labeled `class_code`, in their original order.
std::vector<PatchLabelRecord> QueryLabels(std::span<const PatchLabelRecord> records,
                                          std::string_view class_code);

}  // namespace loopcurate::io
