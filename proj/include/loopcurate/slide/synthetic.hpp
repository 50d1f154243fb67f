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
#include <filesystem>
#include <string>
#include <vector>

#include "loopcurate/core/annotation.hpp"
#include "loopcurate/slide/image.hpp"

namespace loopcurate::slide {

struct SyntheticSpec {
  int width = 4096;
  int height = 4096;
  int n_disks = 50;
  double min_radius = 40.0;
  double max_radius = 90.0;
  std::uint64_t seed = 7;
  int tile_size = 256;
  int levels = 3;
  // Extra clearance between neighbouring disks, in level-0 pixels.
  double min_gap = 16.0;
  // Empty means "synthetic-<seed>".
  std::string slide_id;
};

struct SyntheticSlide {
  std::filesystem::path path;
  // Exact disk geometry as HUMAN_ADDED annotations with ids 1..n.
  AnnotationSet ground_truth;
  // Fill color of disk i (same order as ground_truth.annotations).
  std::vector<Rgb> disk_colors;
  // Reference raster of every pyramid level, as written to the tiles.
  std::vector<RgbImage> levels;
};

// Renders flat-colored, pairwise non-overlapping disks (distinct dark colors)
// on a light textured background, builds the pyramid with 2x2 box filtering
// and writes the tiled container to `out_dir`. Centers and radii are
// multiples of 1/4 px. Same spec and seed give byte-identical files.
// Throws DomainError for an invalid spec or when the disks cannot be packed
// within the retry budget.
SyntheticSlide MakeSyntheticSlide(const SyntheticSpec& spec, const std::filesystem::path& out_dir);

// Only the geometry and colors, without rendering or writing anything.
std::pair<AnnotationSet, std::vector<Rgb>> SyntheticLayout(const SyntheticSpec& spec);

}  // namespace loopcurate::slide
