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
#include "loopcurate/slide/png.hpp"

#include <png.h>

#include <cstring>
#include <vector>

#include "loopcurate/core/error.hpp"

namespace loopcurate::slide {

std::string EncodePng(const RgbImage& image) {
  if (image.empty()) throw DomainError("cannot encode an empty image");
  png_image desc;
  std::memset(&desc, 0, sizeof(desc));
  desc.version = PNG_IMAGE_VERSION;
  desc.width = static_cast<png_uint_32>(image.width());
  desc.height = static_cast<png_uint_32>(image.height());
  desc.format = PNG_FORMAT_RGB;

  png_alloc_size_t size = 0;
  const auto* pixels = image.data().data();
  if (!png_image_write_to_memory(&desc, nullptr, &size, 0, pixels, 0, nullptr)) {
    throw FormatError(std::string("PNG encode failed: ") + desc.message);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&desc, out.data(), &size, 0, pixels, 0, nullptr)) {
    throw FormatError(std::string("PNG encode failed: ") + desc.message);
  }
  out.resize(size);
  return out;
}

RgbImage DecodePng(std::string_view bytes) {
  png_image desc;
  std::memset(&desc, 0, sizeof(desc));
  desc.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&desc, bytes.data(), bytes.size())) {
    throw FormatError(std::string("PNG decode failed: ") + desc.message);
  }
  desc.format = PNG_FORMAT_RGB;
  RgbImage image(static_cast<int>(desc.width), static_cast<int>(desc.height));
  if (!png_image_finish_read(&desc, nullptr, image.mutable_data().data(), 0, nullptr)) {
    png_image_free(&desc);
    throw FormatError(std::string("PNG decode failed: ") + desc.message);
  }
  return image;
}

std::optional<PngHeader> PeekPngHeader(std::string_view bytes) {
  static constexpr unsigned char kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() < 33 || std::memcmp(bytes.data(), kSignature, 8) != 0) return std::nullopt;
  if (bytes.substr(12, 4) != "IHDR") return std::nullopt;
  auto be32 = [&](std::size_t at) {
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + at);
    return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
           (static_cast<std::uint32_t>(p[2]) << 8) | static_cast<std::uint32_t>(p[3]);
  };
  return PngHeader{static_cast<int>(be32(16)), static_cast<int>(be32(20))};
}

}  // namespace loopcurate::slide
