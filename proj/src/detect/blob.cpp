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
#include "loopcurate/detect/blob.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace loopcurate::detect {

namespace {

constexpr double kEps = 1e-9;

bool Contains(const Circle& c, const Point& p) {
  return std::hypot(p.x - c.cx, p.y - c.cy) <= c.r * (1.0 + kEps) + kEps;
}

Circle FromTwo(const Point& a, const Point& b) {
  return {(a.x + b.x) / 2.0, (a.y + b.y) / 2.0, std::hypot(a.x - b.x, a.y - b.y) / 2.0};
}

Circle FromThree(const Point& a, const Point& b, const Point& c) {
  const double bx = b.x - a.x, by = b.y - a.y;
  const double cx = c.x - a.x, cy = c.y - a.y;
  const double d = 2.0 * (bx * cy - by * cx);
  if (std::abs(d) < 1e-12) {
    // Collinear: the widest pair spans the others.
    Circle best = FromTwo(a, b);
    for (const Circle& cand : {FromTwo(a, c), FromTwo(b, c)}) {
      if (cand.r > best.r) best = cand;
    }
    return best;
  }
  const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  const double ux = (cy * b2 - by * c2) / d;
  const double uy = (bx * c2 - cx * b2) / d;
  return {a.x + ux, a.y + uy, std::hypot(ux, uy)};
}

}  // namespace

Circle MinimumEnclosingCircle(std::span<const Point> input) {
  if (input.empty()) return {0.0, 0.0, 0.0};
  std::vector<Point> pts(input.begin(), input.end());
  std::mt19937 rng(0x5eed);
  for (std::size_t i = pts.size(); i > 1; --i) {
    std::swap(pts[i - 1], pts[rng() % i]);
  }

  Circle c{pts[0].x, pts[0].y, 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (Contains(c, pts[i])) continue;
    c = {pts[i].x, pts[i].y, 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (Contains(c, pts[j])) continue;
      c = FromTwo(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (!Contains(c, pts[k])) c = FromThree(pts[i], pts[j], pts[k]);
      }
    }
  }
  return c;
}

std::vector<Component> ConnectedComponents(std::span<const std::uint8_t> mask, int width,
                                           int height) {
  std::vector<Component> out;
  std::vector<std::uint8_t> seen(mask.size(), 0);
  std::vector<int> stack;
  auto fg = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < width && y < height &&
           mask[static_cast<std::size_t>(y) * width + x] != 0;
  };
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * width + x;
      if (!mask[idx] || seen[idx]) continue;
      Component comp;
      seen[idx] = 1;
      stack.assign(1, static_cast<int>(idx));
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        const int px = cur % width, py = cur / width;
        ++comp.area;
        bool border = false;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int nx = px + dx, ny = py + dy;
            if (!fg(nx, ny)) {
              border = true;
              continue;
            }
            const std::size_t nidx = static_cast<std::size_t>(ny) * width + nx;
            if (!seen[nidx]) {
              seen[nidx] = 1;
              stack.push_back(static_cast<int>(nidx));
            }
          }
        }
        if (border) comp.boundary.push_back({px + 0.5, py + 0.5});
      }
      out.push_back(std::move(comp));
    }
  }
  return out;
}

std::vector<std::uint8_t> DarkMask(const slide::RgbImage& image, int threshold) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(image.width()) * image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      mask[static_cast<std::size_t>(y) * image.width() + x] =
          slide::Gray(image.at(x, y)) < threshold ? 1 : 0;
    }
  }
  return mask;
}

}  // namespace loopcurate::detect
