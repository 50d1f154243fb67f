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

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loopcurate/core/annotation.hpp"
#include "loopcurate/core/geometry.hpp"
#include "loopcurate/io/json_codec.hpp"

namespace loopcurate::detect {

inline constexpr int kIouThresholdCount = 10;
inline constexpr int kRecallPointCount = 101;
inline constexpr double kSmallAreaLimit = 32.0 * 32.0;
inline constexpr double kMediumAreaLimit = 96.0 * 96.0;

// 0.50, 0.55, ..., 0.95.
double IouThresholdAt(int index);

std::string_view GeometryModeName(GeometryMode mode);
GeometryMode ParseGeometryMode(std::string_view name);

struct MatchCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  bool operator==(const MatchCounts&) const = default;
};

struct MatchPair {
  AnnotationId detection_id = 0;
  std::optional<AnnotationId> ground_truth_id;
  double iou = 0.0;
};

struct MatchResult {
  MatchCounts counts;
  // One entry per detection in matching order.
  std::vector<MatchPair> pairing;
};

// Detections are processed by descending score (missing score counts as 1.0),
// ties by ascending id. Each takes the unmatched ground truth of highest IoU
// >= iou_threshold, ties to the lower ground-truth id.
MatchResult MatchDetections(std::span<const CircleAnnotation> detections,
                            std::span<const CircleAnnotation> ground_truth, double iou_threshold,
                            GeometryMode mode = GeometryMode::kCircle);

struct PRPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

// One point per distinct detection score, descending. Throws DomainError
// ("undefined recall") when ground_truth is empty.
std::vector<PRPoint> PrecisionRecallCurve(std::span<const CircleAnnotation> detections,
                                          std::span<const CircleAnnotation> ground_truth,
                                          double iou_threshold,
                                          GeometryMode mode = GeometryMode::kCircle);

struct EvaluationImage {
  std::vector<CircleAnnotation> detections;
  std::vector<CircleAnnotation> ground_truth;
};

struct EvaluationReport {
  double ap = 0.0;
  double ap50 = 0.0;
  double ap75 = 0.0;
  std::optional<double> ap_small;
  std::optional<double> ap_medium;
  std::optional<double> ap_large;
  std::array<double, kIouThresholdCount> ap_by_iou{};
  // Keyed by IoU threshold; all ground truth, every image.
  std::map<double, std::vector<PRPoint>> pr_curves;
  MatchCounts counts;  // at IoU 0.5
  GeometryMode geometry_mode = GeometryMode::kCircle;
};

// Mean over the ten IoU thresholds of 101-point interpolated AP. Matching is
// per image; results are accumulated over images. Size buckets partition
// ground truth by Area(geometry, mode): [0, 32^2), [32^2, 96^2), [96^2, inf).
// Ground truth outside a bucket is ignored there, as are detections matched to
// it and unmatched detections outside the bucket. A bucket without ground
// truth is left undefined. Throws DomainError when no image has ground truth.
EvaluationReport AveragePrecision(std::span<const EvaluationImage> images,
                                  GeometryMode mode = GeometryMode::kCircle);
EvaluationReport AveragePrecision(std::span<const CircleAnnotation> detections,
                                  std::span<const CircleAnnotation> ground_truth,
                                  GeometryMode mode = GeometryMode::kCircle);

struct FieldComparison {
  std::string field;
  std::optional<double> before;
  std::optional<double> after;
  std::optional<double> delta;
  // (after - before) / before; undefined when before is 0 or missing.
  std::optional<double> relative_gain;
};

struct LoopComparison {
  GeometryMode geometry_mode = GeometryMode::kCircle;
  std::vector<FieldComparison> fields;  // ap, ap50, ap75, ap_small, ap_medium, ap_large

  const FieldComparison& Field(std::string_view name) const;
};

std::optional<double> RelativeGain(double before, double after);

// Throws DomainError when geometry modes differ.
LoopComparison CompareLoops(const EvaluationReport& a, const EvaluationReport& b);

io::Json ToJson(const MatchCounts& c);
io::Json ToJson(const EvaluationReport& r);
EvaluationReport EvaluationReportFromJson(const io::Json& j);
io::Json ToJson(const LoopComparison& c);

}  // namespace loopcurate::detect
