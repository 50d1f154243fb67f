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
#include "loopcurate/core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>
#include <utility>

#include "loopcurate/core/error.hpp"

namespace loopcurate {

bool IsValidCircle(const Circle& c) noexcept {
  return std::isfinite(c.cx) && std::isfinite(c.cy) && std::isfinite(c.r) && c.r > 0.0;
}

void ValidateCircle(const Circle& c) {
  if (!std::isfinite(c.cx) || !std::isfinite(c.cy)) {
    throw DomainError("circle center must be finite");
  }
  if (!std::isfinite(c.r) || !(c.r > 0.0)) {
    throw DomainError("circle radius must be positive");
  }
}

double CircleArea(const Circle& c) noexcept { return std::numbers::pi * c.r * c.r; }

double BoxArea(const Circle& c) noexcept { return 4.0 * c.r * c.r; }

namespace {

// Canonical operand order: smaller (r, cx, cy) first.
std::pair<const Circle&, const Circle&> Canonical(const Circle& a, const Circle& b) {
  if (std::tie(a.r, a.cx, a.cy) <= std::tie(b.r, b.cx, b.cy)) return {a, b};
  return {b, a};
}

double SegmentTerm(double r, double d, double other_r) {
  double cos_angle = (d * d + r * r - other_r * other_r) / (2.0 * d * r);
  cos_angle = std::clamp(cos_angle, -1.0, 1.0);
  return r * r * std::acos(cos_angle);
}

}  // namespace

double CircleIntersectionArea(const Circle& first, const Circle& second) noexcept {
  const auto [a, b] = Canonical(first, second);
  const double d = std::hypot(a.cx - b.cx, a.cy - b.cy);
  if (d >= a.r + b.r) return 0.0;
  if (d <= std::abs(a.r - b.r) + kContainmentTolerance) {
    const double rmin = std::min(a.r, b.r);
    return std::numbers::pi * rmin * rmin;
  }
  const double kite = (-d + a.r + b.r) * (d + a.r - b.r) * (d - a.r + b.r) * (d + a.r + b.r);
  const double area =
      SegmentTerm(a.r, d, b.r) + SegmentTerm(b.r, d, a.r) - 0.5 * std::sqrt(std::max(kite, 0.0));
  return std::max(area, 0.0);
}

double CircleIou(const Circle& first, const Circle& second) noexcept {
  const auto [a, b] = Canonical(first, second);
  const double d = std::hypot(a.cx - b.cx, a.cy - b.cy);
  if (d >= a.r + b.r) return 0.0;
  if (d <= std::abs(a.r - b.r) + kContainmentTolerance) {
    // One disc inside the other: IoU reduces to the squared radius ratio.
    const double ratio = std::min(a.r, b.r) / std::max(a.r, b.r);
    return ratio * ratio;
  }
  const double inter = CircleIntersectionArea(a, b);
  const double uni = CircleArea(a) + CircleArea(b) - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double BoxIou(const Circle& first, const Circle& second) noexcept {
  const auto [a, b] = Canonical(first, second);
  const double w = std::min(a.cx + a.r, b.cx + b.r) - std::max(a.cx - a.r, b.cx - b.r);
  const double h = std::min(a.cy + a.r, b.cy + b.r) - std::max(a.cy - a.r, b.cy - b.r);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  const double inter = w * h;
  const double uni = BoxArea(a) + BoxArea(b) - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace loopcurate
