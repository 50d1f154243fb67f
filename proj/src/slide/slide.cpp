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
#include "loopcurate/slide/slide.hpp"

#include <algorithm>
#include <fstream>

#include "loopcurate/core/error.hpp"
#include "loopcurate/io/file_util.hpp"
#include "loopcurate/io/json_codec.hpp"
#include "loopcurate/slide/png.hpp"

namespace loopcurate::slide {

namespace fs = std::filesystem;

namespace {

class PngTileDirectory final : public TileSource {
 public:
  explicit PngTileDirectory(fs::path root) : root_(std::move(root)) {}

  RgbImage ReadTile(int level, int row, int col) const override {
    return DecodePng(io::ReadFile(root_ / RelativeTilePath(level, row, col)));
  }

 private:
  fs::path root_;
};

int CeilDiv(long a, long b) { return static_cast<int>((a + b - 1) / b); }

}  // namespace

SlideHandle::SlideHandle(std::string slide_id, std::vector<LevelInfo> levels, int tile_size,
                         fs::path source, std::shared_ptr<const TileSource> tiles)
    : slide_id_(std::move(slide_id)),
      levels_(std::move(levels)),
      tile_size_(tile_size),
      source_(std::move(source)),
      tiles_(std::move(tiles)) {
  ValidatePyramid(levels_, tile_size_);
}

const LevelInfo& SlideHandle::level(int index) const {
  if (index < 0 || index >= level_count()) {
    throw DomainError("level " + std::to_string(index) + " out of range [0," +
                      std::to_string(level_count() - 1) + "]");
  }
  return levels_[static_cast<std::size_t>(index)];
}

int SlideHandle::tile_cols(int lvl) const { return CeilDiv(level(lvl).width, tile_size_); }
int SlideHandle::tile_rows(int lvl) const { return CeilDiv(level(lvl).height, tile_size_); }

int SlideHandle::tile_width(int lvl, int col) const {
  return std::min(tile_size_, level(lvl).width - col * tile_size_);
}

int SlideHandle::tile_height(int lvl, int row) const {
  return std::min(tile_size_, level(lvl).height - row * tile_size_);
}

fs::path SlideHandle::TilePath(int lvl, int row, int col) const {
  return source_ / RelativeTilePath(lvl, row, col);
}

fs::path RelativeTilePath(int level, int row, int col) {
  return fs::path("tiles") / ("L" + std::to_string(level)) /
         (std::to_string(row) + "_" + std::to_string(col) + ".png");
}

void ValidatePyramid(std::span<const LevelInfo> levels, int tile_size) {
  if (tile_size <= 0) throw ValidationError("tile size must be positive");
  if (levels.empty()) throw ValidationError("slide has no levels");
  if (levels[0].downsample != 1) throw ValidationError("level 0 must have downsample 1");
  const long w0 = levels[0].width, h0 = levels[0].height;
  if (w0 <= 0 || h0 <= 0) throw ValidationError("level 0 has an empty extent");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const LevelInfo& l = levels[i];
    const std::string who = "level " + std::to_string(i);
    if (l.downsample <= 0 || (l.downsample & (l.downsample - 1)) != 0) {
      throw ValidationError(who + ": downsample must be a power of two");
    }
    if (i > 0 && l.downsample <= levels[i - 1].downsample) {
      throw ValidationError(who + ": downsample must be strictly increasing");
    }
    const long fw = w0 / l.downsample, cw = CeilDiv(w0, l.downsample);
    const long fh = h0 / l.downsample, ch = CeilDiv(h0, l.downsample);
    if ((l.width != fw && l.width != cw) || (l.height != fh && l.height != ch) || l.width <= 0 ||
        l.height <= 0) {
      throw ValidationError(who + ": size " + std::to_string(l.width) + "x" +
                            std::to_string(l.height) + " inconsistent with downsample " +
                            std::to_string(l.downsample));
    }
  }
}

namespace {

std::string ReadPrefix(const fs::path& path, std::size_t n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::string buf(n, '\0');
  in.read(buf.data(), static_cast<std::streamsize>(n));
  buf.resize(static_cast<std::size_t>(in.gcount()));
  return buf;
}

}  // namespace

SlideHandle OpenSlide(const fs::path& path) {
  fs::path dir = path;
  std::error_code ec;
  if (!fs::exists(path, ec)) throw NotFoundError("no such slide: " + path.string());
  if (!fs::is_directory(path, ec)) {
    if (path.filename() != kDescriptorName) {
      throw FormatError("unrecognized slide container: " + path.string());
    }
    dir = path.parent_path();
  }
  const fs::path descriptor = dir / kDescriptorName;
  if (!fs::exists(descriptor, ec)) {
    throw FormatError("unrecognized slide container (no " + std::string(kDescriptorName) +
                      "): " + dir.string());
  }

  io::Json doc;
  try {
    doc = io::ParseJson(io::ReadFile(descriptor));
  } catch (const ParseError& e) {
    throw FormatError("unreadable slide descriptor " + descriptor.string() + ": " + e.message());
  }
  std::string slide_id;
  int tile_size = 0;
  std::vector<LevelInfo> levels;
  try {
    if (doc.value("format", std::string()) != kContainerFormat) {
      throw FormatError("unrecognized slide container format in " + descriptor.string());
    }
    slide_id = io::RequireString(doc, "slide_id");
    tile_size = static_cast<int>(io::RequireInteger(doc, "tile_size"));
    const io::Json& lv = io::RequireField(doc, "levels");
    if (!lv.is_array()) throw ValidationError("'levels' must be an array");
    for (const auto& l : lv) {
      levels.push_back({static_cast<int>(io::RequireInteger(l, "downsample")),
                        static_cast<int>(io::RequireInteger(l, "width")),
                        static_cast<int>(io::RequireInteger(l, "height"))});
    }
  } catch (const ValidationError& e) {
    throw ValidationError("slide descriptor " + descriptor.string() + ": " + e.message());
  }

  SlideHandle handle(slide_id, levels, tile_size, dir, std::make_shared<PngTileDirectory>(dir));
  for (int lvl = 0; lvl < handle.level_count(); ++lvl) {
    for (int row = 0; row < handle.tile_rows(lvl); ++row) {
      for (int col = 0; col < handle.tile_cols(lvl); ++col) {
        const fs::path tile = handle.TilePath(lvl, row, col);
        const auto header = PeekPngHeader(ReadPrefix(tile, 33));
        const std::string where = "level " + std::to_string(lvl) + ": tile " +
                                  std::to_string(row) + "_" + std::to_string(col);
        if (!header) throw ValidationError(where + " is missing or truncated");
        if (header->width != handle.tile_width(lvl, col) ||
            header->height != handle.tile_height(lvl, row)) {
          throw ValidationError(where + " has unexpected dimensions");
        }
      }
    }
  }
  return handle;
}

void WriteTiledSlide(const fs::path& dir, const std::string& slide_id, int tile_size,
                     std::span<const RgbImage> rasters) {
  std::vector<LevelInfo> levels;
  for (std::size_t i = 0; i < rasters.size(); ++i) {
    levels.push_back({1 << i, rasters[i].width(), rasters[i].height()});
  }
  ValidatePyramid(levels, tile_size);

  for (std::size_t lvl = 0; lvl < rasters.size(); ++lvl) {
    const RgbImage& raster = rasters[lvl];
    const int rows = CeilDiv(raster.height(), tile_size);
    const int cols = CeilDiv(raster.width(), tile_size);
    for (int row = 0; row < rows; ++row) {
      for (int col = 0; col < cols; ++col) {
        const int tw = std::min(tile_size, raster.width() - col * tile_size);
        const int th = std::min(tile_size, raster.height() - row * tile_size);
        const RgbImage tile = raster.Crop(col * tile_size, row * tile_size, tw, th);
        io::WriteFileAtomic(dir / RelativeTilePath(static_cast<int>(lvl), row, col),
                            EncodePng(tile));
      }
    }
  }

  io::Json lv = io::Json::array();
  for (const auto& l : levels) {
    lv.push_back({{"downsample", l.downsample}, {"width", l.width}, {"height", l.height}});
  }
  const io::Json doc = {{"format", kContainerFormat},
                        {"version", 1},
                        {"slide_id", slide_id},
                        {"tile_size", tile_size},
                        {"levels", std::move(lv)}};
  io::WriteFileAtomic(dir / kDescriptorName, io::CanonicalJson(doc));
}

PatchImage ReadRegion(const SlideHandle& slide, int level, long x, long y, int w, int h) {
  const LevelInfo& info = slide.level(level);
  if (w <= 0 || h <= 0) throw DomainError("region must have positive width and height");
  const long x1 = x + w, y1 = y + h;
  if (x1 <= 0 || y1 <= 0 || x >= info.width || y >= info.height) {
    throw DomainError("region does not intersect level " + std::to_string(level));
  }

  PatchImage patch;
  patch.pixels = RgbImage(w, h, kWhite);
  patch.origin_x = x * info.downsample;
  patch.origin_y = y * info.downsample;
  patch.level = level;

  const int ts = slide.tile_size();
  const int col0 = static_cast<int>(std::max(0L, x) / ts);
  const int col1 = static_cast<int>((std::min<long>(x1, info.width) - 1) / ts);
  const int row0 = static_cast<int>(std::max(0L, y) / ts);
  const int row1 = static_cast<int>((std::min<long>(y1, info.height) - 1) / ts);
  for (int row = row0; row <= row1; ++row) {
    for (int col = col0; col <= col1; ++col) {
      const RgbImage tile = slide.tiles().ReadTile(level, row, col);
      if (tile.width() != slide.tile_width(level, col) ||
          tile.height() != slide.tile_height(level, row)) {
        throw ValidationError("level " + std::to_string(level) + ": tile " +
                              std::to_string(row) + "_" + std::to_string(col) +
                              " has unexpected dimensions");
      }
      patch.pixels.Blit(tile, static_cast<int>(col * static_cast<long>(ts) - x),
                        static_cast<int>(row * static_cast<long>(ts) - y));
    }
  }
  return patch;
}

}  // namespace loopcurate::slide
