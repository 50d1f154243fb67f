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

#include <cmath>
#include <limits>
#include <vector>

#include "loopcurate/detect/blob.hpp"

namespace loopcurate::oracle {

// Smallest enclosing circle by trying every circle through two or three of
// the points.
inline Circle BruteForceEnclosingCircle(const std::vector<detect::Point>& pts) {
  if (pts.size() == 1) return {pts[0].x, pts[0].y, 0.0};
  auto covers = [&](double cx, double cy, double r) {
    for (const auto& p : pts) {
      if (std::hypot(p.x - cx, p.y - cy) > r * (1 + 1e-9) + 1e-9) return false;
    }
    return true;
  };
  Circle best{0, 0, std::numeric_limits<double>::infinity()};
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double cx = (pts[i].x + pts[j].x) / 2, cy = (pts[i].y + pts[j].y) / 2;
      const double r = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y) / 2;
      if (r < best.r && covers(cx, cy, r)) best = {cx, cy, r};
      for (std::size_t k = j + 1; k < n; ++k) {
        const double ax = pts[i].x, ay = pts[i].y, bx = pts[j].x, by = pts[j].y, qx = pts[k].x,
                     qy = pts[k].y;
        const double d = 2 * (ax * (by - qy) + bx * (qy - ay) + qx * (ay - by));
        if (std::abs(d) < 1e-12) continue;
        const double ux = ((ax * ax + ay * ay) * (by - qy) + (bx * bx + by * by) * (qy - ay) +
                           (qx * qx + qy * qy) * (ay - by)) / d;
        const double uy = ((ax * ax + ay * ay) * (qx - bx) + (bx * bx + by * by) * (ax - qx) +
                           (qx * qx + qy * qy) * (bx - ax)) / d;
        const double rr = std::hypot(ax - ux, ay - uy);
        if (rr < best.r && covers(ux, uy, rr)) best = {ux, uy, rr};
      }
    }
  }
  return best;
}

}  // namespace loopcurate::oracle
