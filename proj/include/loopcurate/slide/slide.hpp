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

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loopcurate/core/annotation.hpp"
#include "loopcurate/slide/image.hpp"

namespace loopcurate::slide {

// Descriptor file name inside a slide directory.
inline constexpr const char* kDescriptorName = "slide.json";
inline constexpr const char* kContainerFormat = "loopcurate-tiles";

struct LevelInfo {
  int downsample = 1;  // power of two, relative to level 0
  int width = 0;
  int height = 0;

  bool operator==(const LevelInfo&) const = default;
};

// Pixel access for one container type. Implementations must be safe to call
// from several threads at once.
class TileSource {
 public:
  virtual ~TileSource() = default;
  virtual RgbImage ReadTile(int level, int row, int col) const = 0;
};

// An opened pyramidal slide. Holds metadata only; pixels come from the tile
// source on demand. Cheap to copy, and copies share the tile source.
class SlideHandle {
 public:
  SlideHandle(std::string slide_id, std::vector<LevelInfo> levels, int tile_size,
              std::filesystem::path source, std::shared_ptr<const TileSource> tiles);

  const std::string& slide_id() const { return slide_id_; }
  const std::vector<LevelInfo>& levels() const { return levels_; }
  const LevelInfo& level(int index) const;
  int level_count() const { return static_cast<int>(levels_.size()); }
  int coarsest_level() const { return level_count() - 1; }
  int tile_size() const { return tile_size_; }
  const std::filesystem::path& source() const { return source_; }
  int width() const { return levels_.front().width; }
  int height() const { return levels_.front().height; }

  int tile_cols(int level) const;
  int tile_rows(int level) const;
  // Pixel size of a tile; edge tiles are cropped to the level extent.
  int tile_width(int level, int col) const;
  int tile_height(int level, int row) const;
  std::filesystem::path TilePath(int level, int row, int col) const;

  const TileSource& tiles() const { return *tiles_; }

 private:
  std::string slide_id_;
  std::vector<LevelInfo> levels_;
  int tile_size_;
  std::filesystem::path source_;
  std::shared_ptr<const TileSource> tiles_;
};

// Throws ValidationError unless level 0 has downsample 1, downsamples are
// strictly increasing powers of two and each level's size is the level-0
// size divided by its downsample (floor or ceil).
void ValidatePyramid(std::span<const LevelInfo> levels, int tile_size);

// Opens a slide directory (or its slide.json). Checks the descriptor and that
// every tile file exists with a PNG header of the expected size, without
// decoding pixels. Throws NotFoundError, FormatError (unknown container) or
// ValidationError (naming the level) on failure.
SlideHandle OpenSlide(const std::filesystem::path& path);

// Relative tile location inside a slide directory: tiles/L<level>/<row>_<col>.png
std::filesystem::path RelativeTilePath(int level, int row, int col);

// Writes a complete container: descriptor plus tiles of every level raster.
// levels[i] must be the raster of pyramid level i.
void WriteTiledSlide(const std::filesystem::path& dir, const std::string& slide_id, int tile_size,
                     std::span<const RgbImage> levels);

struct PatchImage {
  RgbImage pixels;
  long origin_x = 0;  // level-0 coordinates of the top-left pixel
  long origin_y = 0;
  int level = 0;
  std::optional<AnnotationId> annotation_id;
};

// Reads the rectangle [x, x+w) x [y, y+h), given in pixels of `level`,
// assembling it from the covering tiles. Area outside the slide is white.
// Throws DomainError for an unknown level, a non-positive size or a
// rectangle that misses the slide entirely.
PatchImage ReadRegion(const SlideHandle& slide, int level, long x, long y, int w, int h);

}  // namespace loopcurate::slide
