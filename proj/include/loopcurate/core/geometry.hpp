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

namespace loopcurate {

// A circle in level-0 (full resolution) slide pixels. Coordinates are real
// valued; rasterization only happens when rendering or extracting.
struct Circle {
  double cx = 0.0;
  double cy = 0.0;
  double r = 1.0;

  bool operator==(const Circle&) const = default;
};

// Throws DomainError when r <= 0 or any coordinate is not finite.
void ValidateCircle(const Circle& c);
bool IsValidCircle(const Circle& c) noexcept;

double CircleArea(const Circle& c) noexcept;
// Area of the axis-aligned bounding square.
double BoxArea(const Circle& c) noexcept;

// Tolerance on the containment predicate d <= |ra - rb|.
inline constexpr double kContainmentTolerance = 1e-12;

// Exact area of the intersection of two circles (lens formula, with the
// containment and disjoint cases handled separately).
double CircleIntersectionArea(const Circle& a, const Circle& b) noexcept;

// Intersection over union of the two discs. Symmetric bit-for-bit.
double CircleIou(const Circle& a, const Circle& b) noexcept;

// Intersection over union of the bounding squares [cx-r, cx+r] x [cy-r, cy+r].
double BoxIou(const Circle& a, const Circle& b) noexcept;

enum class GeometryMode { kCircle, kBox };

inline double Iou(const Circle& a, const Circle& b, GeometryMode mode) noexcept {
  return mode == GeometryMode::kCircle ? CircleIou(a, b) : BoxIou(a, b);
}

inline double Area(const Circle& c, GeometryMode mode) noexcept {
  return mode == GeometryMode::kCircle ? CircleArea(c) : BoxArea(c);
}

}  // namespace loopcurate
