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
#include <cstdint>
#include <span>
#include <vector>

namespace loopcurate::slide {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr Rgb kWhite = {255, 255, 255};

// Row-major interleaved 8-bit RGB raster.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, Rgb fill = kWhite);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  Rgb at(int x, int y) const {
    const std::uint8_t* p = &pixels_[Offset(x, y)];
    return {p[0], p[1], p[2]};
  }
  void set(int x, int y, Rgb c) {
    std::uint8_t* p = &pixels_[Offset(x, y)];
    p[0] = c[0];
    p[1] = c[1];
    p[2] = c[2];
  }

  std::span<const std::uint8_t> row(int y) const {
    return {pixels_.data() + Offset(0, y), static_cast<std::size_t>(width_) * 3};
  }
  std::span<std::uint8_t> row(int y) {
    return {pixels_.data() + Offset(0, y), static_cast<std::size_t>(width_) * 3};
  }
  std::span<const std::uint8_t> data() const { return pixels_; }
  std::span<std::uint8_t> mutable_data() { return pixels_; }

  // Copies `src` so its top-left lands at (x, y); parts outside are dropped.
  void Blit(const RgbImage& src, int x, int y);
  RgbImage Crop(int x, int y, int w, int h) const;

  bool operator==(const RgbImage&) const = default;

 private:
  std::size_t Offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * 3;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// 2x2 box filter with rounding; odd trailing rows/columns average the
// pixels that exist. Output is ceil(w/2) x ceil(h/2).
RgbImage Downsample2x(const RgbImage& src);

// Rec. 601 luma, integer arithmetic.
inline int Gray(Rgb c) { return (299 * c[0] + 587 * c[1] + 114 * c[2] + 500) / 1000; }

}  // namespace loopcurate::slide
