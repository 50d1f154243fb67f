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
#include <span>
#include <vector>

#include "loopcurate/core/geometry.hpp"
#include "loopcurate/slide/image.hpp"

namespace loopcurate::detect {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Smallest circle containing every point (randomized incremental algorithm,
// expected linear time, deterministic shuffle). Empty input gives r = 0.
Circle MinimumEnclosingCircle(std::span<const Point> points);

struct Component {
  std::vector<Point> boundary;  // pixel centers on the component border
  long area = 0;                // pixel count
};

// 8-connected components of `mask` (row-major, width*height, non-zero is
// foreground), in raster order of their first pixel.
std::vector<Component> ConnectedComponents(std::span<const std::uint8_t> mask, int width,
                                           int height);

// Foreground where luma < threshold.
std::vector<std::uint8_t> DarkMask(const slide::RgbImage& image, int threshold);

}  // namespace loopcurate::detect
