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

#include <optional>
#include <string>
#include <string_view>

#include "loopcurate/slide/image.hpp"

namespace loopcurate::slide {

// 8-bit RGB PNG. Output is a pure function of the pixels.
std::string EncodePng(const RgbImage& image);

// Any PNG libpng understands, converted to 8-bit RGB. Throws FormatError.
RgbImage DecodePng(std::string_view bytes);

struct PngHeader {
  int width = 0;
  int height = 0;
};

// Reads the signature and IHDR chunk only. nullopt when those 33 bytes are
// missing or not a PNG header.
std::optional<PngHeader> PeekPngHeader(std::string_view bytes);

}  // namespace loopcurate::slide
