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
#include "loopcurate/core/edit.hpp"

#include <algorithm>
#include <unordered_map>

#include "loopcurate/core/error.hpp"

namespace loopcurate {

std::string_view EditKindName(EditKind kind) {
  switch (kind) {
    case EditKind::kAdd: return "ADD";
    case EditKind::kDelete: return "DELETE";
    case EditKind::kMove: return "MOVE";
    case EditKind::kResize: return "RESIZE";
    case EditKind::kReclassify: return "RECLASSIFY";
  }
  return "ADD";
}

EditKind ParseEditKind(std::string_view name) {
  if (name == "ADD") return EditKind::kAdd;
  if (name == "DELETE") return EditKind::kDelete;
  if (name == "MOVE") return EditKind::kMove;
  if (name == "RESIZE") return EditKind::kResize;
  if (name == "RECLASSIFY") return EditKind::kReclassify;
  throw DomainError("unknown edit kind '" + std::string(name) + "'");
}

AnnotationEdit AnnotationEdit::Add(Circle c, Timestamp at) {
  AnnotationEdit e;
  e.kind = EditKind::kAdd;
  e.circle = c;
  e.timestamp = at;
  return e;
}

AnnotationEdit AnnotationEdit::Delete(AnnotationId id, Timestamp at) {
  AnnotationEdit e;
  e.kind = EditKind::kDelete;
  e.target_id = id;
  e.timestamp = at;
  return e;
}

AnnotationEdit AnnotationEdit::Move(AnnotationId id, Circle c, Timestamp at) {
  AnnotationEdit e;
  e.kind = EditKind::kMove;
  e.target_id = id;
  e.circle = c;
  e.timestamp = at;
  return e;
}

AnnotationEdit AnnotationEdit::Resize(AnnotationId id, Circle c, Timestamp at) {
  AnnotationEdit e = Move(id, c, at);
  e.kind = EditKind::kResize;
  return e;
}

AnnotationEdit AnnotationEdit::Reclassify(AnnotationId id, std::string label, Timestamp at) {
  AnnotationEdit e;
  e.kind = EditKind::kReclassify;
  e.target_id = id;
  e.class_label = std::move(label);
  e.timestamp = at;
  return e;
}

void ValidateEditPayload(const AnnotationEdit& edit) {
  const std::string kind(EditKindName(edit.kind));
  switch (edit.kind) {
    case EditKind::kAdd:
      if (edit.target_id) throw DomainError("ADD must not name a target id");
      if (!edit.circle) throw DomainError("ADD requires a circle");
      ValidateCircle(*edit.circle);
      if (edit.class_label && edit.class_label->empty()) {
        throw DomainError("ADD with an empty class label");
      }
      break;
    case EditKind::kDelete:
      if (!edit.target_id) throw DomainError("DELETE requires a target id");
      break;
    case EditKind::kMove:
    case EditKind::kResize:
      if (!edit.target_id) throw DomainError(kind + " requires a target id");
      if (!edit.circle) throw DomainError(kind + " requires a circle");
      ValidateCircle(*edit.circle);
      break;
    case EditKind::kReclassify:
      if (!edit.target_id) throw DomainError("RECLASSIFY requires a target id");
      if (!edit.class_label || edit.class_label->empty()) {
        throw DomainError("RECLASSIFY requires a class label");
      }
      break;
  }
  if (edit.loop_index < 0) throw DomainError("negative loop index on edit");
}

AnnotationSet ApplyEdit(const AnnotationSet& set, const AnnotationEdit& edit) {
  ValidateEditPayload(edit);
  AnnotationSet out = set;
  if (edit.kind == EditKind::kAdd) {
    CircleAnnotation added;
    added.id = set.MaxId() + 1;
    added.geometry = *edit.circle;
    added.class_label = edit.class_label;
    added.provenance = Provenance::kHumanAdded;
    added.loop_index = edit.loop_index;
    out.annotations.push_back(std::move(added));
    return out;
  }

  auto it = std::find_if(out.annotations.begin(), out.annotations.end(),
                         [&](const CircleAnnotation& a) { return a.id == *edit.target_id; });
  if (it == out.annotations.end()) {
    throw NotFoundError("no annotation with id " + std::to_string(*edit.target_id) + " on slide " +
                        set.slide_id);
  }
  switch (edit.kind) {
    case EditKind::kDelete:
      out.annotations.erase(it);
      break;
    case EditKind::kMove:
    case EditKind::kResize:
      it->geometry = *edit.circle;
      if (it->provenance == Provenance::kMachine) it->provenance = Provenance::kHumanEdited;
      break;
    case EditKind::kReclassify:
      it->class_label = edit.class_label;
      break;
    case EditKind::kAdd:
      break;
  }
  return out;
}

AnnotationSet Replay(const AnnotationSet& base, std::span<const AnnotationEdit> edits) {
  AnnotationSet current = base;
  for (const auto& edit : edits) current = ApplyEdit(current, edit);
  return current;
}

AnnotationSet Replay(const AnnotationSet& base, const EditLog& log) {
  if (!log.slide_id.empty() && log.slide_id != base.slide_id) {
    throw DomainError("edit log for slide " + log.slide_id + " replayed over slide " +
                      base.slide_id);
  }
  return Replay(base, std::span<const AnnotationEdit>(log.edits));
}

CurationDiff DiffSets(const AnnotationSet& machine, const AnnotationSet& curated,
                      double iou_threshold) {
  if (machine.slide_id != curated.slide_id) {
    throw DomainError("cannot diff slide " + machine.slide_id + " against " + curated.slide_id);
  }
  std::unordered_map<AnnotationId, const CircleAnnotation*> original;
  original.reserve(machine.annotations.size());
  for (const auto& a : machine.annotations) original.emplace(a.id, &a);

  CurationDiff diff;
  for (const auto& a : curated.annotations) {
    auto it = original.find(a.id);
    if (it == original.end()) {
      ++diff.added;
      continue;
    }
    const CircleAnnotation& before = *it->second;
    if (CircleIou(before.geometry, a.geometry) < iou_threshold) {
      ++diff.moved;
    } else {
      ++diff.unchanged;
    }
    if (before.class_label != a.class_label) ++diff.reclassified;
    original.erase(it);
  }
  diff.deleted = static_cast<int>(original.size());
  return diff;
}

}  // namespace loopcurate
