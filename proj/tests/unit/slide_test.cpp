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
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "loopcurate/core/error.hpp"
#include "loopcurate/io/file_util.hpp"
#include "loopcurate/io/json_codec.hpp"
#include "loopcurate/slide/image.hpp"
#include "loopcurate/slide/patches.hpp"
#include "loopcurate/slide/png.hpp"
#include "loopcurate/slide/slide.hpp"
#include "loopcurate/slide/synthetic.hpp"
#include "support/temp_dir.hpp"

namespace loopcurate {
namespace {

namespace fs = std::filesystem;
using slide::RgbImage;

slide::SyntheticSpec SmallSpec() {
  slide::SyntheticSpec spec;
  spec.width = 900;
  spec.height = 700;
  spec.n_disks = 12;
  spec.min_radius = 20;
  spec.max_radius = 45;
  spec.tile_size = 128;
  spec.levels = 3;
  spec.seed = 3;
  spec.slide_id = "small";
  return spec;
}

TEST(Image, DownsampleOddSizes) {
  RgbImage img(3, 3, {0, 0, 0});
  img.set(2, 2, {200, 100, 50});
  img.set(0, 0, {4, 4, 4});
  const RgbImage half = slide::Downsample2x(img);
  ASSERT_EQ(half.width(), 2);
  ASSERT_EQ(half.height(), 2);
  EXPECT_EQ(half.at(0, 0), (slide::Rgb{1, 1, 1}));
  EXPECT_EQ(half.at(1, 1), (slide::Rgb{200, 100, 50}));
}

TEST(Image, CropAndBlit) {
  RgbImage img(10, 10);
  img.set(5, 5, {1, 2, 3});
  const RgbImage crop = img.Crop(4, 4, 3, 3);
  EXPECT_EQ(crop.at(1, 1), (slide::Rgb{1, 2, 3}));
  RgbImage canvas(4, 4, {0, 0, 0});
  canvas.Blit(crop, 2, 2);
  EXPECT_EQ(canvas.at(3, 3), (slide::Rgb{1, 2, 3}));
  EXPECT_EQ(canvas.at(0, 0), (slide::Rgb{0, 0, 0}));
}

TEST(Png, RoundTripAndHeader) {
  std::mt19937_64 rng(8);
  RgbImage img(37, 19);
  for (auto& b : img.mutable_data()) b = static_cast<std::uint8_t>(rng());
  const std::string bytes = slide::EncodePng(img);
  EXPECT_EQ(slide::DecodePng(bytes), img);
  EXPECT_EQ(slide::EncodePng(img), bytes);
  const auto header = slide::PeekPngHeader(bytes);
  ASSERT_TRUE(header);
  EXPECT_EQ(header->width, 37);
  EXPECT_EQ(header->height, 19);
  EXPECT_FALSE(slide::PeekPngHeader("not a png"));
  EXPECT_THROW(slide::DecodePng("garbage bytes"), FormatError);
}

TEST(Pyramid, Validation) {
  EXPECT_NO_THROW(slide::ValidatePyramid(std::vector<slide::LevelInfo>{{1, 100, 50}, {2, 50, 25}, {4, 25, 13}}, 64));
  EXPECT_THROW(slide::ValidatePyramid(std::vector<slide::LevelInfo>{{2, 100, 50}}, 64), ValidationError);
  EXPECT_THROW(slide::ValidatePyramid(std::vector<slide::LevelInfo>{{1, 100, 50}, {3, 34, 17}}, 64), ValidationError);
  EXPECT_THROW(slide::ValidatePyramid(std::vector<slide::LevelInfo>{{1, 100, 50}, {2, 40, 25}}, 64), ValidationError);
  EXPECT_THROW(slide::ValidatePyramid(std::vector<slide::LevelInfo>{{1, 100, 50}}, 0), ValidationError);
}

class SlideTest : public ::testing::Test {
 protected:
  void SetUp() override { made_ = slide::MakeSyntheticSlide(SmallSpec(), dir_ / "small"); }
  testing::TempDir dir_;
  slide::SyntheticSlide made_;
};

TEST_F(SlideTest, OpenReportsPyramid) {
  const auto handle = slide::OpenSlide(made_.path);
  EXPECT_EQ(handle.slide_id(), "small");
  ASSERT_EQ(handle.level_count(), 3);
  EXPECT_EQ(handle.level(0), (slide::LevelInfo{1, 900, 700}));
  EXPECT_EQ(handle.level(2).downsample, 4);
  EXPECT_EQ(slide::OpenSlide(made_.path / slide::kDescriptorName).width(), 900);
}

TEST_F(SlideTest, ReadRegionMatchesReferenceRaster) {
  const auto handle = slide::OpenSlide(made_.path);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 60; ++i) {
    const int level = static_cast<int>(rng() % 3);
    const auto& info = handle.level(level);
    const int w = 1 + static_cast<int>(rng() % 200), h = 1 + static_cast<int>(rng() % 200);
    const long x = static_cast<long>(rng() % info.width), y = static_cast<long>(rng() % info.height);
    const auto patch = slide::ReadRegion(handle, level, x, y, w, h);
    RgbImage expected(w, h);
    expected.Blit(made_.levels[level].Crop(static_cast<int>(x), static_cast<int>(y),
                                           std::min<int>(w, info.width - x),
                                           std::min<int>(h, info.height - y)),
                  0, 0);
    ASSERT_EQ(patch.pixels, expected) << level << " " << x << "," << y << " " << w << "x" << h;
    EXPECT_EQ(patch.origin_x, x * info.downsample);
  }
}

TEST_F(SlideTest, ReadRegionOutsideIsWhiteAndErrors) {
  const auto handle = slide::OpenSlide(made_.path);
  const auto patch = slide::ReadRegion(handle, 0, -5, -5, 10, 10);
  EXPECT_EQ(patch.pixels.at(0, 0), slide::kWhite);
  EXPECT_EQ(patch.pixels.at(9, 9), made_.levels[0].at(4, 4));
  EXPECT_THROW(slide::ReadRegion(handle, 3, 0, 0, 1, 1), DomainError);
  EXPECT_THROW(slide::ReadRegion(handle, 0, 0, 0, 0, 1), DomainError);
  EXPECT_THROW(slide::ReadRegion(handle, 0, 900, 0, 5, 5), DomainError);
}

TEST_F(SlideTest, OpenErrors) {
  EXPECT_THROW(slide::OpenSlide(dir_ / "missing"), NotFoundError);

  fs::remove(made_.path / slide::RelativeTilePath(1, 0, 0));
  EXPECT_THROW(slide::OpenSlide(made_.path), ValidationError);

  const fs::path desc = made_.path / slide::kDescriptorName;
  io::Json doc = io::ParseJson(io::ReadFile(desc));
  doc["format"] = "svs";
  io::WriteFileAtomic(desc, doc.dump());
  EXPECT_THROW(slide::OpenSlide(made_.path), FormatError);
}

TEST_F(SlideTest, WrongTileSizeNamesLevel) {
  io::WriteFileAtomic(made_.path / slide::RelativeTilePath(2, 0, 0), slide::EncodePng(RgbImage(3, 3)));
  try {
    slide::OpenSlide(made_.path);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(e.message().find("level 2"), std::string::npos) << e.message();
  }
}

TEST(Synthetic, DeterministicAndDisjoint) {
  testing::TempDir a, b;
  const auto s1 = slide::MakeSyntheticSlide(SmallSpec(), a / "s");
  const auto s2 = slide::MakeSyntheticSlide(SmallSpec(), b / "s");
  EXPECT_EQ(s1.ground_truth, s2.ground_truth);
  for (const auto& entry : fs::recursive_directory_iterator(a / "s")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), a / "s");
    EXPECT_EQ(io::ReadFile(entry.path()), io::ReadFile(b / "s" / rel)) << rel;
  }
  const auto& gts = s1.ground_truth.annotations;
  ASSERT_EQ(gts.size(), 12u);
  for (std::size_t i = 0; i < gts.size(); ++i) {
    EXPECT_EQ(gts[i].id, i + 1);
    for (std::size_t j = i + 1; j < gts.size(); ++j) {
      const auto& p = gts[i].geometry;
      const auto& q = gts[j].geometry;
      EXPECT_GT(std::hypot(p.cx - q.cx, p.cy - q.cy), p.r + q.r);
    }
  }
  EXPECT_EQ(slide::SyntheticLayout(SmallSpec()).first, s1.ground_truth);
}

TEST(Synthetic, RejectsImpossibleSpec) {
  testing::TempDir dir;
  auto spec = SmallSpec();
  spec.n_disks = 5000;
  EXPECT_THROW(slide::MakeSyntheticSlide(spec, dir / "x"), DomainError);
  spec = SmallSpec();
  spec.min_radius = 0;
  EXPECT_THROW(slide::MakeSyntheticSlide(spec, dir / "y"), DomainError);
}

TEST(PatchRect, Examples) {
  EXPECT_EQ(slide::ComputePatchRect({100, 100, 50}, 0.2, 1000, 1000), (slide::PatchRect{40, 40, 120, 120, false}));
  EXPECT_EQ(slide::ComputePatchRect({10, 20, 50}, 0.0, 1000, 1000), (slide::PatchRect{0, 0, 60, 70, true}));
  EXPECT_EQ(slide::ComputePatchRect({5, 5, 0.1}, 0.0, 100, 100).width, 1);
  EXPECT_THROW(slide::ComputePatchRect({100, 100, 5}, -0.1, 1000, 1000), DomainError);
  EXPECT_THROW(slide::ComputePatchRect({-100, -100, 5}, 0.2, 1000, 1000), DomainError);
}

TEST_F(SlideTest, ExtractPatchesMatchesReadRegion) {
  const auto handle = slide::OpenSlide(made_.path);
  AnnotationSet set = made_.ground_truth;
  set.annotations.push_back({99, {3, 3, 30}, std::nullopt, std::nullopt, Provenance::kHumanAdded, 0});
  const fs::path out = dir_ / "patches";
  const auto manifest = slide::ExtractPatches(handle, set, 0.2, out);
  ASSERT_EQ(manifest.entries.size(), set.annotations.size());
  for (const auto& e : manifest.entries) {
    const auto png = slide::DecodePng(io::ReadFile(out / e.patch_file));
    const auto region = slide::ReadRegion(handle, 0, e.origin_x, e.origin_y, e.width, e.height);
    ASSERT_EQ(png, region.pixels) << e.patch_file;
    EXPECT_EQ(e.patch_file, slide::PatchFileName("small", e.annotation_id));
  }
  EXPECT_TRUE(manifest.entries.back().clipped);
  const std::string bytes = io::ReadFile(out / slide::kManifestName);
  EXPECT_EQ(slide::ReadPatchManifest(bytes), manifest);
  slide::ExtractPatches(handle, set, 0.2, out);
  EXPECT_EQ(io::ReadFile(out / slide::kManifestName), bytes);
}

}  // namespace
}  // namespace loopcurate
