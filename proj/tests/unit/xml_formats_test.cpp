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

#include <cmath>
#include <random>

#include "loopcurate/core/error.hpp"
#include "loopcurate/io/imagescope_xml.hpp"
#include "loopcurate/io/native_xml.hpp"
#include "loopcurate/io/number_format.hpp"
#include "support/generators.hpp"
#include "support/golden.hpp"
#include "support/golden_fixtures.hpp"

namespace loopcurate {
namespace {

using testing::GoldenSet;

TEST(NumberFormat, Coordinates) {
  EXPECT_EQ(io::FormatCoordinate(100.0), "100");
  EXPECT_EQ(io::FormatCoordinate(0.5), "0.5");
  EXPECT_EQ(io::FormatCoordinate(1.23456), "1.2346");
  EXPECT_EQ(io::FormatCoordinate(-0.00001), "0");
  EXPECT_EQ(io::FormatCoordinate(-2.5), "-2.5");
  EXPECT_EQ(io::FormatCoordinate(1e7), "10000000");
}

TEST(NumberFormat, ScoresRoundTripExactly) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double v = testing::Uniform(rng, 0, 1);
    const std::string s = io::FormatScore(v);
    EXPECT_EQ(s.find('e'), std::string::npos);
    EXPECT_EQ(io::ParseNumber(s), v) << s;
  }
  EXPECT_EQ(io::FormatScore(0.87), "0.87");
  EXPECT_EQ(io::FormatScore(1.0), "1");
  EXPECT_EQ(io::FormatScore(0.0), "0");
  EXPECT_EQ(io::FormatScore(1e-7), "0.0000001");
}

TEST(NumberFormat, StrictParse) {
  EXPECT_EQ(io::ParseNumber("0.25"), 0.25);
  EXPECT_EQ(io::ParseNumber("-3"), -3.0);
  for (const char* bad : {"", " 1", "1 ", "+1", "abc", "1.2.3", "inf", "nan", "0x10"}) {
    EXPECT_FALSE(io::ParseNumber(bad).has_value()) << bad;
  }
  EXPECT_EQ(io::ParseInteger("42"), 42);
  EXPECT_FALSE(io::ParseInteger("4.2").has_value());
}

TEST(NativeXml, GoldenDocument) {
  const std::string xml = io::WriteNativeXml(GoldenSet());
  EXPECT_TRUE(testing::MatchesGolden("native_set.xml", xml));
  EXPECT_EQ(io::ParseNativeXml(xml).set, GoldenSet());
}

TEST(NativeXml, EmptySet) {
  const AnnotationSet empty{"blank", {}, 0.0};
  const auto parsed = io::ParseNativeXml(io::WriteNativeXml(empty));
  EXPECT_EQ(parsed.set, empty);
  EXPECT_TRUE(parsed.warnings.empty());
}

TEST(NativeXml, RoundTripRandomSets) {
  std::mt19937_64 rng(1000);
  for (int i = 0; i < 1000; ++i) {
    const AnnotationSet set = testing::RandomSet(rng);
    const std::string xml = io::WriteNativeXml(set);
    const auto parsed = io::ParseNativeXml(xml);
    ASSERT_EQ(parsed.set, set) << xml;
    ASSERT_EQ(io::WriteNativeXml(parsed.set), xml);
  }
}

TEST(NativeXml, UnknownAttributeWarns) {
  const std::string xml =
      "<EasierSet slide_id=\"a\" threshold=\"0\"><Objects>"
      "<Circle cx=\"1\" cy=\"2\" r=\"3\" score=\"0.5\" provenance=\"MACHINE\" id=\"1\" loop=\"0\" "
      "colour=\"red\"/><Extra/></Objects></EasierSet>";
  const auto parsed = io::ParseNativeXml(xml);
  ASSERT_EQ(parsed.set.annotations.size(), 1u);
  EXPECT_GE(parsed.warnings.size(), 2u);
}

TEST(NativeXml, MalformedIsParseErrorWithLocation) {
  try {
    io::ParseNativeXml("<EasierSet slide_id=\"a\">\n<Objects>\n</EasierSet>");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    ASSERT_TRUE(e.location().has_value());
    EXPECT_EQ(e.location()->line, 3);
  }
}

TEST(NativeXml, InvariantViolationsAreValidationErrors) {
  const std::string dup =
      "<EasierSet slide_id=\"a\" threshold=\"0\"><Objects>"
      "<Circle cx=\"1\" cy=\"2\" r=\"3\" score=\"0.5\" provenance=\"MACHINE\" id=\"1\" loop=\"0\"/>"
      "<Circle cx=\"1\" cy=\"2\" r=\"3\" score=\"0.5\" provenance=\"MACHINE\" id=\"1\" loop=\"0\"/>"
      "</Objects></EasierSet>";
  EXPECT_THROW(io::ParseNativeXml(dup), ValidationError);
  const std::string unscored =
      "<EasierSet slide_id=\"a\" threshold=\"0\"><Objects>"
      "<Circle cx=\"1\" cy=\"2\" r=\"3\" provenance=\"MACHINE\" id=\"1\" loop=\"0\"/>"
      "</Objects></EasierSet>";
  EXPECT_THROW(io::ParseNativeXml(unscored), ValidationError);
  const std::string bad_radius =
      "<EasierSet slide_id=\"a\" threshold=\"0\"><Objects>"
      "<Circle cx=\"1\" cy=\"2\" r=\"-3\" provenance=\"HUMAN_ADDED\" id=\"1\" loop=\"0\"/>"
      "</Objects></EasierSet>";
  EXPECT_THROW(io::ParseNativeXml(bad_radius), ValidationError);
}

TEST(ImageScope, GoldenDocument) {
  const std::string xml = io::WriteImageScopeXml(GoldenSet(), 0.25);
  EXPECT_TRUE(testing::MatchesGolden("imagescope_set.xml", xml));
}

TEST(ImageScope, KeepsOnlyAnnotationsAboveThreshold) {
  const auto imported = io::ImportImageScopeXml(io::WriteImageScopeXml(GoldenSet(), 0.25), "S1");
  std::vector<AnnotationId> ids;
  for (const auto& a : imported.set.annotations) ids.push_back(a.id);
  EXPECT_EQ(ids, (std::vector<AnnotationId>{1, 3, 5}));
  EXPECT_EQ(imported.microns_per_pixel, 0.25);
}

TEST(ImageScope, RoundTripWithinQuantizationAndExactScores) {
  std::mt19937_64 rng(2000);
  for (int i = 0; i < 1000; ++i) {
    AnnotationSet set = testing::RandomSet(rng);
    set.active_threshold = 0.0;
    const auto imported = io::ImportImageScopeXml(io::WriteImageScopeXml(set, 0.5), set.slide_id);
    ASSERT_EQ(imported.set.annotations.size(), set.annotations.size());
    for (std::size_t k = 0; k < set.annotations.size(); ++k) {
      const auto& a = set.annotations[k];
      const auto& b = imported.set.annotations[k];
      EXPECT_EQ(a.id, b.id);
      EXPECT_NEAR(a.geometry.cx, b.geometry.cx, 1e-4);
      EXPECT_NEAR(a.geometry.cy, b.geometry.cy, 1e-4);
      EXPECT_NEAR(a.geometry.r, b.geometry.r, 1e-4);
      EXPECT_EQ(a.score, b.score);
    }
  }
}

TEST(ImageScope, ForeignDocument) {
  const std::string xml = R"(<?xml version="1.0"?>
<Annotations MicronsPerPixel="0.5">
  <Annotation Id="1">
    <Regions>
      <Region Id="4" Type="2" Text="">
        <Vertices><Vertex X="0" Y="0"/><Vertex X="20" Y="10"/></Vertices>
      </Region>
      <Region Id="4" Type="2" Text="score:0.25">
        <Vertices><Vertex X="100" Y="100"/><Vertex X="120" Y="120"/></Vertices>
      </Region>
      <Region Id="9" Type="0" Text="freehand">
        <Vertices><Vertex X="0" Y="0"/><Vertex X="1" Y="1"/><Vertex X="2" Y="0"/></Vertices>
      </Region>
    </Regions>
  </Annotation>
</Annotations>
)";
  const auto imported = io::ImportImageScopeXml(xml, "foreign");
  ASSERT_EQ(imported.set.annotations.size(), 2u);
  EXPECT_EQ(imported.skipped_regions, 1);
  EXPECT_EQ(imported.warnings.size(), 2u);
  const auto& first = imported.set.annotations[0];
  EXPECT_EQ(first.id, 4u);
  EXPECT_EQ(first.geometry, (Circle{10, 5, 7.5}));
  EXPECT_EQ(first.provenance, Provenance::kHumanAdded);
  const auto& second = imported.set.annotations[1];
  EXPECT_EQ(second.id, 5u);
  EXPECT_EQ(second.score, 0.25);
  EXPECT_EQ(second.provenance, Provenance::kMachine);
}

TEST(ImageScope, EllipseNeedsTwoVertices) {
  const std::string xml =
      "<Annotations><Annotation><Regions><Region Id=\"1\" Type=\"2\"><Vertices>"
      "<Vertex X=\"0\" Y=\"0\"/></Vertices></Region></Regions></Annotation></Annotations>";
  EXPECT_THROW(io::ImportImageScopeXml(xml, "s"), ValidationError);
  EXPECT_THROW(io::ImportImageScopeXml("<Annotations>", "s"), ParseError);
}

}  // namespace
}  // namespace loopcurate
