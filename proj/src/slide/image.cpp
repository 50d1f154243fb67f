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
#include "loopcurate/slide/image.hpp"

#include <algorithm>
#include <cstring>

#include "loopcurate/core/error.hpp"

namespace loopcurate::slide {

RgbImage::RgbImage(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw DomainError("negative image size");
  pixels_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
  for (std::size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = fill[0];
    pixels_[i + 1] = fill[1];
    pixels_[i + 2] = fill[2];
  }
}

void RgbImage::Blit(const RgbImage& src, int x, int y) {
  const int x0 = std::max(0, x), y0 = std::max(0, y);
  const int x1 = std::min(width_, x + src.width()), y1 = std::min(height_, y + src.height());
  if (x0 >= x1 || y0 >= y1) return;
  const std::size_t bytes = static_cast<std::size_t>(x1 - x0) * 3;
  for (int row_y = y0; row_y < y1; ++row_y) {
    std::memcpy(&pixels_[Offset(x0, row_y)], &src.pixels_[src.Offset(x0 - x, row_y - y)], bytes);
  }
}

RgbImage RgbImage::Crop(int x, int y, int w, int h) const {
  RgbImage out(w, h);
  out.Blit(*this, -x, -y);
  return out;
}

RgbImage Downsample2x(const RgbImage& src) {
  const int w = (src.width() + 1) / 2;
  const int h = (src.height() + 1) / 2;
  RgbImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int sum[3] = {0, 0, 0};
      int n = 0;
      for (int dy = 0; dy < 2; ++dy) {
        const int sy = 2 * y + dy;
        if (sy >= src.height()) continue;
        for (int dx = 0; dx < 2; ++dx) {
          const int sx = 2 * x + dx;
          if (sx >= src.width()) continue;
          const Rgb c = src.at(sx, sy);
          for (int k = 0; k < 3; ++k) sum[k] += c[k];
          ++n;
        }
      }
      out.set(x, y,
              {static_cast<std::uint8_t>((sum[0] + n / 2) / n),
               static_cast<std::uint8_t>((sum[1] + n / 2) / n),
               static_cast<std::uint8_t>((sum[2] + n / 2) / n)});
    }
  }
  return out;
}

}  // namespace loopcurate::slide
