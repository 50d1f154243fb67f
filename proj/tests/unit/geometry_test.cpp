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
#include "loopcurate/core/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "loopcurate/core/error.hpp"
#include "oracles/geometry_oracle.hpp"

namespace loopcurate {
namespace {

TEST(CircleIou, IdenticalCirclesGiveOne) {
  EXPECT_EQ(CircleIou({5, 5, 3}, {5, 5, 3}), 1.0);
}

TEST(CircleIou, DisjointCirclesGiveZero) {
  EXPECT_EQ(CircleIou({0, 0, 3}, {10, 0, 3}), 0.0);
  EXPECT_EQ(CircleIou({0, 0, 3}, {6, 0, 3}), 0.0);  // tangent
}

// Frozen from the 50-digit segment oracle.
TEST(CircleIou, UnitCirclesAtUnitDistance) {
  const double expected = oracle::ExtendedIou({0, 0, 1}, {1, 0, 1});
  EXPECT_NEAR(expected, 0.243010, 1e-6);
  EXPECT_NEAR(CircleIou({0, 0, 1}, {1, 0, 1}), expected, 1e-12);
  EXPECT_NEAR(oracle::MonteCarloIou({0, 0, 1}, {1, 0, 1}, 1'000'000, 11), expected, 1e-2);
}

TEST(CircleIou, ContainmentIsSquaredRadiusRatio) {
  EXPECT_DOUBLE_EQ(CircleIou({0, 0, 10}, {1, 1, 5}), 0.25);
  EXPECT_DOUBLE_EQ(CircleIou({0, 0, 4}, {0, 0, 2}), 0.25);
  // Internally tangent sits on the containment branch.
  EXPECT_DOUBLE_EQ(CircleIou({0, 0, 10}, {5, 0, 5}), 0.25);
}

TEST(CircleIou, PropertiesOnRandomPairs) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pos(0, 100), rad(0.5, 40);
  for (int i = 0; i < 5000; ++i) {
    const Circle a{pos(rng), pos(rng), rad(rng)};
    const Circle b{pos(rng), pos(rng), rad(rng)};
    const double ab = CircleIou(a, b);
    EXPECT_EQ(ab, CircleIou(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    const double d = std::hypot(a.cx - b.cx, a.cy - b.cy);
    EXPECT_EQ(ab == 0.0, d >= a.r + b.r);
    EXPECT_LT(ab, 1.0);
    EXPECT_NEAR(ab, oracle::ExtendedIou(a, b), 1e-9);
  }
}

TEST(CircleIou, NearTangentAndNearConcentricAgreeWithOracle) {
  const Circle a{0, 0, 10};
  for (double eps : {1e-3, 1e-6, 1e-9}) {
    EXPECT_NEAR(CircleIou(a, {20 - eps, 0, 10}), oracle::ExtendedIou(a, {20 - eps, 0, 10}), 1e-9);
    EXPECT_NEAR(CircleIou(a, {5 + eps, 0, 5}), oracle::ExtendedIou(a, {5 + eps, 0, 5}), 1e-9);
    EXPECT_NEAR(CircleIou(a, {eps, 0, 10}), oracle::ExtendedIou(a, {eps, 0, 10}), 1e-9);
  }
}

TEST(CircleIntersectionArea, MatchesOracleAndBounds) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(0, 50), rad(0.5, 30);
  for (int i = 0; i < 1000; ++i) {
    const Circle a{pos(rng), pos(rng), rad(rng)}, b{pos(rng), pos(rng), rad(rng)};
    const double area = CircleIntersectionArea(a, b);
    EXPECT_LE(area, std::min(CircleArea(a), CircleArea(b)) * (1 + 1e-12));
    EXPECT_NEAR(area, static_cast<double>(oracle::ExtendedIntersectionArea(a, b)),
                1e-9 * std::max(1.0, CircleArea(a)));
  }
}

TEST(BoxIou, Examples) {
  EXPECT_EQ(BoxIou({3, 3, 2}, {3, 3, 2}), 1.0);
  EXPECT_EQ(BoxIou({0, 0, 1}, {5, 5, 1}), 0.0);
  EXPECT_DOUBLE_EQ(BoxIou({0, 0, 1}, {1, 0, 1}), 1.0 / 3.0);
}

TEST(BoxIou, SymmetricAndBounded) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> pos(0, 100), rad(0.5, 40);
  for (int i = 0; i < 2000; ++i) {
    const Circle a{pos(rng), pos(rng), rad(rng)}, b{pos(rng), pos(rng), rad(rng)};
    EXPECT_EQ(BoxIou(a, b), BoxIou(b, a));
    EXPECT_GE(BoxIou(a, b), 0.0);
    EXPECT_LE(BoxIou(a, b), 1.0);
  }
}

TEST(Circle, Validation) {
  EXPECT_NO_THROW(ValidateCircle({0, 0, 1}));
  EXPECT_THROW(ValidateCircle({0, 0, 0}), DomainError);
  EXPECT_THROW(ValidateCircle({0, 0, -1}), DomainError);
  EXPECT_THROW(ValidateCircle({NAN, 0, 1}), DomainError);
  EXPECT_THROW(ValidateCircle({0, INFINITY, 1}), DomainError);
  EXPECT_FALSE(IsValidCircle({0, 0, NAN}));
}

TEST(Circle, AreasPerMode) {
  EXPECT_DOUBLE_EQ(Area({0, 0, 2}, GeometryMode::kCircle), 4 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(Area({0, 0, 2}, GeometryMode::kBox), 16.0);
  EXPECT_EQ(Iou({0, 0, 1}, {1, 0, 1}, GeometryMode::kBox), BoxIou({0, 0, 1}, {1, 0, 1}));
}

}  // namespace
}  // namespace loopcurate
