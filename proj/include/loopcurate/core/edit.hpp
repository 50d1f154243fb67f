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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "loopcurate/core/annotation.hpp"
#include "loopcurate/core/timestamp.hpp"

namespace loopcurate {

enum class EditKind { kAdd, kDelete, kMove, kResize, kReclassify };

std::string_view EditKindName(EditKind kind);
EditKind ParseEditKind(std::string_view name);

// One manual QA action. ADD carries a circle (and optionally a class label),
// MOVE/RESIZE carry the replacement circle, RECLASSIFY carries the class.
struct AnnotationEdit {
  EditKind kind = EditKind::kAdd;
  std::optional<AnnotationId> target_id;
  std::optional<Circle> circle;
  std::optional<std::string> class_label;
  // Loop stamped on annotations created by ADD.
  int loop_index = 0;
  Timestamp timestamp;

  static AnnotationEdit Add(Circle c, Timestamp at = Timestamp::Now());
  static AnnotationEdit Delete(AnnotationId id, Timestamp at = Timestamp::Now());
  static AnnotationEdit Move(AnnotationId id, Circle c, Timestamp at = Timestamp::Now());
  static AnnotationEdit Resize(AnnotationId id, Circle c, Timestamp at = Timestamp::Now());
  static AnnotationEdit Reclassify(AnnotationId id, std::string label,
                                   Timestamp at = Timestamp::Now());

  bool operator==(const AnnotationEdit&) const = default;
};

// Checks the edit is well formed on its own (payload present and valid for
// its kind). Throws DomainError.
void ValidateEditPayload(const AnnotationEdit& edit);

// Applies one edit and returns the new set; the input is untouched.
//  ADD        appends a HUMAN_ADDED annotation with id MaxId()+1, no score.
//  DELETE     removes the target.
//  MOVE/RESIZE replace geometry and mark the target HUMAN_EDITED (score kept).
//  RECLASSIFY sets the class label.
// Throws NotFoundError for an unknown target and DomainError for a malformed
// payload.
AnnotationSet ApplyEdit(const AnnotationSet& set, const AnnotationEdit& edit);

struct EditLog {
  std::string slide_id;
  std::vector<AnnotationEdit> edits;

  void Append(AnnotationEdit edit) { edits.push_back(std::move(edit)); }
  bool operator==(const EditLog&) const = default;
};

// Folds ApplyEdit over the edits in order.
AnnotationSet Replay(const AnnotationSet& base, std::span<const AnnotationEdit> edits);
AnnotationSet Replay(const AnnotationSet& base, const EditLog& log);

struct CurationDiff {
  int added = 0;
  int deleted = 0;
  int moved = 0;
  int unchanged = 0;
  // Informational: annotations whose class changed. Not part of the
  // partition above (a reclassified object is also moved or unchanged).
  int reclassified = 0;

  bool operator==(const CurationDiff&) const = default;
};

// Partitions the union of ids of the two sets. An id present in both is
// "moved" when the IoU of its two geometries is below iou_threshold, else
// "unchanged". Throws DomainError when the slide ids differ.
CurationDiff DiffSets(const AnnotationSet& machine, const AnnotationSet& curated,
                      double iou_threshold = 1.0);

}  // namespace loopcurate
