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
#include "loopcurate/slide/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "loopcurate/core/error.hpp"
#include "loopcurate/slide/slide.hpp"

namespace loopcurate::slide {

namespace {

constexpr Rgb kBackground = {232, 222, 228};
constexpr int kNoiseAmplitude = 6;
constexpr int kAttemptsPerDisk = 2000;

// std distributions are implementation defined; map raw engine output
// ourselves so the layout is the same with every standard library.
double Uniform(std::mt19937_64& rng, double lo, double hi) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

double QuarterPixel(double v) { return std::round(v * 4.0) / 4.0; }

std::uint64_t Mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void ValidateSpec(const SyntheticSpec& s) {
  if (s.width <= 0 || s.height <= 0) throw DomainError("synthetic slide size must be positive");
  if (s.n_disks < 0) throw DomainError("disk count must be non-negative");
  if (!(s.min_radius > 0.0) || s.max_radius < s.min_radius) {
    throw DomainError("radius range must satisfy 0 < min <= max");
  }
  if (s.levels < 1 || s.levels > 16) throw DomainError("level count must be in [1,16]");
  if (s.tile_size <= 0) throw DomainError("tile size must be positive");
  if (s.min_gap < 0.0) throw DomainError("disk gap must be non-negative");
  if ((s.width >> (s.levels - 1)) < 1 || (s.height >> (s.levels - 1)) < 1) {
    throw DomainError("too many levels for the slide size");
  }
}

}  // namespace

std::pair<AnnotationSet, std::vector<Rgb>> SyntheticLayout(const SyntheticSpec& spec) {
  ValidateSpec(spec);
  std::mt19937_64 rng(spec.seed);
  AnnotationSet truth;
  truth.slide_id = spec.slide_id.empty() ? "synthetic-" + std::to_string(spec.seed) : spec.slide_id;

  std::vector<Rgb> colors;
  std::set<Rgb> used_colors;
  int attempts = 0;
  const int budget = std::max(1, spec.n_disks) * kAttemptsPerDisk;
  while (static_cast<int>(truth.annotations.size()) < spec.n_disks) {
    if (++attempts > budget) {
      throw DomainError("cannot pack " + std::to_string(spec.n_disks) +
                        " disks into the slide after " + std::to_string(budget) + " attempts");
    }
    const double r = QuarterPixel(Uniform(rng, spec.min_radius, spec.max_radius));
    const double margin = r + 1.0;
    if (2.0 * margin >= spec.width || 2.0 * margin >= spec.height) continue;
    const double cx = QuarterPixel(Uniform(rng, margin, spec.width - margin));
    const double cy = QuarterPixel(Uniform(rng, margin, spec.height - margin));
    const bool clear = std::all_of(
        truth.annotations.begin(), truth.annotations.end(), [&](const CircleAnnotation& o) {
          return std::hypot(cx - o.geometry.cx, cy - o.geometry.cy) >
                 r + o.geometry.r + spec.min_gap;
        });
    if (!clear) continue;

    Rgb color;
    do {
      color = {static_cast<std::uint8_t>(40 + rng() % 110), static_cast<std::uint8_t>(20 + rng() % 90),
               static_cast<std::uint8_t>(60 + rng() % 100)};
    } while (!used_colors.insert(color).second);

    CircleAnnotation a;
    a.id = truth.annotations.size() + 1;
    a.geometry = {cx, cy, r};
    a.provenance = Provenance::kHumanAdded;
    truth.annotations.push_back(a);
    colors.push_back(color);
  }
  return {std::move(truth), std::move(colors)};
}

SyntheticSlide MakeSyntheticSlide(const SyntheticSpec& spec, const std::filesystem::path& out_dir) {
  auto [truth, colors] = SyntheticLayout(spec);

  RgbImage base(spec.width, spec.height, kBackground);
  for (int y = 0; y < spec.height; ++y) {
    auto row = base.row(y);
    for (int x = 0; x < spec.width; ++x) {
      const std::uint64_t h =
          Mix(spec.seed ^ (static_cast<std::uint64_t>(y) << 32 | static_cast<std::uint32_t>(x)));
      const int delta = static_cast<int>(h % (2 * kNoiseAmplitude + 1)) - kNoiseAmplitude;
      for (int k = 0; k < 3; ++k) {
        row[static_cast<std::size_t>(x) * 3 + k] =
            static_cast<std::uint8_t>(std::clamp(kBackground[k] + delta, 0, 255));
      }
    }
  }
  for (std::size_t i = 0; i < truth.annotations.size(); ++i) {
    const Circle& c = truth.annotations[i].geometry;
    const int x0 = std::max(0, static_cast<int>(std::floor(c.cx - c.r)));
    const int x1 = std::min(spec.width - 1, static_cast<int>(std::ceil(c.cx + c.r)));
    const int y0 = std::max(0, static_cast<int>(std::floor(c.cy - c.r)));
    const int y1 = std::min(spec.height - 1, static_cast<int>(std::ceil(c.cy + c.r)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double dx = x + 0.5 - c.cx, dy = y + 0.5 - c.cy;
        if (dx * dx + dy * dy <= c.r * c.r) base.set(x, y, colors[i]);
      }
    }
  }

  SyntheticSlide out;
  out.path = out_dir;
  out.levels.push_back(std::move(base));
  for (int l = 1; l < spec.levels; ++l) out.levels.push_back(Downsample2x(out.levels.back()));
  WriteTiledSlide(out_dir, truth.slide_id, spec.tile_size, out.levels);
  out.ground_truth = std::move(truth);
  out.disk_colors = std::move(colors);
  return out;
}

}  // namespace loopcurate::slide
