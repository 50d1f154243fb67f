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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "loopcurate/core/geometry.hpp"

namespace loopcurate {

using AnnotationId = std::uint64_t;

enum class Provenance { kMachine, kHumanAdded, kHumanEdited };

std::string_view ProvenanceName(Provenance p);
// Accepts MACHINE, HUMAN_ADDED and HUMAN_EDITED; throws DomainError otherwise.
Provenance ParseProvenance(std::string_view name);

struct CircleAnnotation {
  AnnotationId id = 0;
  Circle geometry;
  // Detection confidence in [0,1]. Absent for human-created objects.
  std::optional<double> score;
  // Class code from the project's class configuration, absent when unlabeled.
  std::optional<std::string> class_label;
  Provenance provenance = Provenance::kMachine;
  int loop_index = 0;

  bool is_human() const { return provenance != Provenance::kMachine; }

  bool operator==(const CircleAnnotation&) const = default;
};

struct AnnotationSet {
  std::string slide_id;
  std::vector<CircleAnnotation> annotations;
  double active_threshold = 0.0;

  const CircleAnnotation* Find(AnnotationId id) const;
  AnnotationId MaxId() const;

  bool operator==(const AnnotationSet&) const = default;
};

// Checks the per-annotation invariants (valid circle, score in [0,1], machine
// objects carry a score, human-added objects do not, loop_index >= 0).
// Throws DomainError naming the offending annotation.
void ValidateAnnotation(const CircleAnnotation& a);
// ValidateAnnotation on every member plus unique ids and threshold in [0,1].
void ValidateSet(const AnnotationSet& set);

// True when the annotation survives a threshold: machine detections need
// score >= threshold, human-touched annotations always survive.
bool IsKept(const CircleAnnotation& a, double threshold);

// Keeps machine annotations with score >= threshold and every human
// annotation, preserving order and ids. Throws DomainError when threshold is
// outside [0,1].
AnnotationSet FilterByThreshold(const AnnotationSet& set, double threshold);

enum class ThresholdDirection { kUp, kDown };

inline constexpr double kDefaultThresholdStep = 0.05;

// Moves active_threshold by +/- step, clamped to [0,1], then filters at the
// new value. Pass the unfiltered set: annotations hidden by an earlier filter
// cannot reappear from a filtered input. Throws DomainError when step <= 0.
AnnotationSet StepThreshold(const AnnotationSet& set, ThresholdDirection direction,
                            double step = kDefaultThresholdStep);

// The threshold StepThreshold would move to. The result is rounded to 1e-9
// so that repeated steps of 0.05 land on the decimal grid.
double SteppedThreshold(double current, ThresholdDirection direction, double step);

}  // namespace loopcurate
