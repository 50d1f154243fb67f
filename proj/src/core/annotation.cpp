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
#include "loopcurate/core/annotation.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "loopcurate/core/error.hpp"

namespace loopcurate {

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kMachine: return "MACHINE";
    case Provenance::kHumanAdded: return "HUMAN_ADDED";
    case Provenance::kHumanEdited: return "HUMAN_EDITED";
  }
  return "MACHINE";
}

Provenance ParseProvenance(std::string_view name) {
  if (name == "MACHINE") return Provenance::kMachine;
  if (name == "HUMAN_ADDED") return Provenance::kHumanAdded;
  if (name == "HUMAN_EDITED") return Provenance::kHumanEdited;
  throw DomainError("unknown provenance '" + std::string(name) + "'");
}

const CircleAnnotation* AnnotationSet::Find(AnnotationId id) const {
  auto it = std::find_if(annotations.begin(), annotations.end(),
                         [id](const CircleAnnotation& a) { return a.id == id; });
  return it == annotations.end() ? nullptr : &*it;
}

AnnotationId AnnotationSet::MaxId() const {
  AnnotationId max_id = 0;
  for (const auto& a : annotations) max_id = std::max(max_id, a.id);
  return max_id;
}

namespace {

bool InUnitInterval(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

}  // namespace

void ValidateAnnotation(const CircleAnnotation& a) {
  const std::string who = "annotation " + std::to_string(a.id);
  if (!IsValidCircle(a.geometry)) {
    throw DomainError(who + ": radius must be positive and coordinates finite");
  }
  if (a.score && !InUnitInterval(*a.score)) {
    throw DomainError(who + ": score must be in [0,1]");
  }
  if (a.provenance == Provenance::kMachine && !a.score) {
    throw DomainError(who + ": machine detection without a score");
  }
  if (a.provenance == Provenance::kHumanAdded && a.score) {
    throw DomainError(who + ": human-added annotation must not carry a score");
  }
  if (a.class_label && a.class_label->empty()) {
    throw DomainError(who + ": empty class label");
  }
  if (a.loop_index < 0) {
    throw DomainError(who + ": negative loop index");
  }
}

void ValidateSet(const AnnotationSet& set) {
  if (!InUnitInterval(set.active_threshold)) {
    throw DomainError("active threshold must be in [0,1]");
  }
  std::unordered_set<AnnotationId> seen;
  seen.reserve(set.annotations.size());
  for (const auto& a : set.annotations) {
    ValidateAnnotation(a);
    if (!seen.insert(a.id).second) {
      throw DomainError("duplicate annotation id " + std::to_string(a.id));
    }
  }
}

bool IsKept(const CircleAnnotation& a, double threshold) {
  if (a.is_human() || !a.score) return true;
  return *a.score >= threshold;
}

AnnotationSet FilterByThreshold(const AnnotationSet& set, double threshold) {
  if (!InUnitInterval(threshold)) {
    throw DomainError("threshold must be in [0,1]");
  }
  AnnotationSet out;
  out.slide_id = set.slide_id;
  out.active_threshold = threshold;
  out.annotations.reserve(set.annotations.size());
  std::copy_if(set.annotations.begin(), set.annotations.end(),
               std::back_inserter(out.annotations),
               [threshold](const CircleAnnotation& a) { return IsKept(a, threshold); });
  return out;
}

double SteppedThreshold(double current, ThresholdDirection direction, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw DomainError("threshold step must be positive");
  }
  double next = direction == ThresholdDirection::kUp ? current + step : current - step;
  next = std::round(next * 1e9) / 1e9;
  return std::clamp(next, 0.0, 1.0);
}

AnnotationSet StepThreshold(const AnnotationSet& set, ThresholdDirection direction, double step) {
  return FilterByThreshold(set, SteppedThreshold(set.active_threshold, direction, step));
}

}  // namespace loopcurate
