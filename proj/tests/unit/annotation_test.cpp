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
#include "loopcurate/core/annotation.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "loopcurate/core/error.hpp"
#include "support/generators.hpp"

namespace loopcurate {
namespace {

CircleAnnotation Machine(AnnotationId id, double score) {
  CircleAnnotation a;
  a.id = id;
  a.geometry = {10.0 * id, 10, 4};
  a.score = score;
  return a;
}

CircleAnnotation Human(AnnotationId id) {
  CircleAnnotation a;
  a.id = id;
  a.geometry = {10.0 * id, 50, 4};
  a.provenance = Provenance::kHumanAdded;
  return a;
}

std::set<AnnotationId> Ids(const AnnotationSet& s) {
  std::set<AnnotationId> out;
  for (const auto& a : s.annotations) out.insert(a.id);
  return out;
}

TEST(FilterByThreshold, BoundaryIsInclusive) {
  AnnotationSet set{"s", {Machine(1, 0.2), Machine(2, 0.5), Machine(3, 0.9)}, 0.0};
  const AnnotationSet kept = FilterByThreshold(set, 0.5);
  EXPECT_EQ(Ids(kept), (std::set<AnnotationId>{2, 3}));
  EXPECT_EQ(kept.active_threshold, 0.5);
  EXPECT_EQ(kept.slide_id, "s");
}

TEST(FilterByThreshold, ZeroKeepsEverything) {
  std::mt19937_64 rng(1);
  const AnnotationSet set = testing::RandomSet(rng);
  EXPECT_EQ(FilterByThreshold(set, 0.0).annotations, set.annotations);
}

TEST(FilterByThreshold, HumanAnnotationSurvives) {
  AnnotationSet set{"s", {Human(1), Machine(2, 0.1)}, 0.0};
  EXPECT_EQ(Ids(FilterByThreshold(set, 0.9)), (std::set<AnnotationId>{1}));
}

TEST(FilterByThreshold, PreservesOrder) {
  AnnotationSet set{"s", {Machine(5, 0.9), Human(2), Machine(9, 0.1), Machine(1, 0.6)}, 0.0};
  const auto kept = FilterByThreshold(set, 0.5);
  ASSERT_EQ(kept.annotations.size(), 3u);
  EXPECT_EQ(kept.annotations[0].id, 5u);
  EXPECT_EQ(kept.annotations[1].id, 2u);
  EXPECT_EQ(kept.annotations[2].id, 1u);
}

TEST(FilterByThreshold, RejectsOutOfRange) {
  AnnotationSet set{"s", {}, 0.0};
  EXPECT_THROW(FilterByThreshold(set, -0.01), DomainError);
  EXPECT_THROW(FilterByThreshold(set, 1.01), DomainError);
  EXPECT_THROW(FilterByThreshold(set, NAN), DomainError);
}

TEST(FilterByThreshold, MonotoneAndHumanPersistentOnRandomSets) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const AnnotationSet set = testing::RandomSet(rng);
    double t1 = testing::Uniform(rng, 0, 1), t2 = testing::Uniform(rng, 0, 1);
    if (t1 > t2) std::swap(t1, t2);
    const auto k1 = Ids(FilterByThreshold(set, t1)), k2 = Ids(FilterByThreshold(set, t2));
    EXPECT_TRUE(std::includes(k1.begin(), k1.end(), k2.begin(), k2.end()));
    for (const auto& a : set.annotations) {
      if (a.is_human()) EXPECT_TRUE(k2.contains(a.id));
    }
  }
}

TEST(StepThreshold, Arithmetic) {
  EXPECT_DOUBLE_EQ(SteppedThreshold(0.90, ThresholdDirection::kUp, 0.05), 0.95);
  EXPECT_EQ(SteppedThreshold(0.98, ThresholdDirection::kUp, 0.05), 1.0);
  EXPECT_EQ(SteppedThreshold(0.02, ThresholdDirection::kDown, 0.05), 0.0);
  EXPECT_EQ(SteppedThreshold(0.95, ThresholdDirection::kUp, 0.05), 1.0);
  EXPECT_THROW(SteppedThreshold(0.5, ThresholdDirection::kUp, 0.0), DomainError);
}

TEST(StepThreshold, DownTwiceGrowsKeptSet) {
  std::mt19937_64 rng(77);
  AnnotationSet set{"s", {}, 0.5};
  for (AnnotationId id = 1; id <= 20; ++id) set.annotations.push_back(Machine(id, testing::Uniform(rng, 0, 1)));
  const AnnotationSet once = StepThreshold(set, ThresholdDirection::kDown);
  const AnnotationSet twice = StepThreshold(once, ThresholdDirection::kDown);
  EXPECT_DOUBLE_EQ(twice.active_threshold, 0.40);
  const auto k0 = Ids(FilterByThreshold(set, 0.5)), k1 = Ids(once), k2 = Ids(twice);
  EXPECT_TRUE(std::includes(k1.begin(), k1.end(), k0.begin(), k0.end()));
  EXPECT_TRUE(std::includes(k2.begin(), k2.end(), k1.begin(), k1.end()));
}

TEST(ValidateAnnotation, Rules) {
  EXPECT_NO_THROW(ValidateAnnotation(Machine(1, 0.5)));
  EXPECT_NO_THROW(ValidateAnnotation(Human(1)));
  CircleAnnotation unscored = Machine(1, 0.5);
  unscored.score.reset();
  EXPECT_THROW(ValidateAnnotation(unscored), Error);
  CircleAnnotation scored_human = Human(1);
  scored_human.score = 0.4;
  EXPECT_THROW(ValidateAnnotation(scored_human), Error);
  EXPECT_THROW(ValidateAnnotation(Machine(1, 1.5)), Error);
  CircleAnnotation bad_label = Machine(1, 0.5);
  bad_label.class_label = "";
  EXPECT_THROW(ValidateAnnotation(bad_label), Error);
}

TEST(ValidateSet, RejectsDuplicateIdsAndBadThreshold) {
  EXPECT_THROW(ValidateSet({"s", {Machine(1, 0.1), Machine(1, 0.2)}, 0.0}), Error);
  EXPECT_THROW(ValidateSet({"s", {}, 1.5}), Error);
  EXPECT_NO_THROW(ValidateSet({"s", {Machine(1, 0.1), Human(2)}, 0.3}));
}

TEST(AnnotationSet, FindAndMaxId) {
  AnnotationSet set{"s", {Machine(4, 0.1), Human(9)}, 0.0};
  EXPECT_EQ(set.MaxId(), 9u);
  ASSERT_NE(set.Find(4), nullptr);
  EXPECT_EQ(set.Find(5), nullptr);
  EXPECT_EQ(AnnotationSet{}.MaxId(), 0u);
}

TEST(Provenance, Names) {
  for (Provenance p : {Provenance::kMachine, Provenance::kHumanAdded, Provenance::kHumanEdited}) {
    EXPECT_EQ(ParseProvenance(ProvenanceName(p)), p);
  }
  EXPECT_THROW(ParseProvenance("ROBOT"), DomainError);
}

}  // namespace
}  // namespace loopcurate
