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

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "loopcurate/core/annotation.hpp"
#include "loopcurate/core/timestamp.hpp"
#include "loopcurate/io/class_config.hpp"
#include "loopcurate/io/patch_labels.hpp"

namespace loopcurate::testing {

inline double Uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int UniformInt(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Rounded to the 4 decimals the XML writers keep.
inline double Quantized(double v) { return std::round(v * 1e4) / 1e4; }

inline std::string RandomToken(std::mt19937_64& rng, int min_len, int max_len) {
  static const std::string alphabet =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_-";
  std::string s;
  const int n = UniformInt(rng, min_len, max_len);
  for (int i = 0; i < n; ++i) s += alphabet[UniformInt(rng, 0, static_cast<int>(alphabet.size()) - 1)];
  return s;
}

// Valid set: unique ids, machine annotations scored, human ones per rules.
inline AnnotationSet RandomSet(std::mt19937_64& rng, int max_size = 40) {
  AnnotationSet set;
  set.slide_id = "slide-" + RandomToken(rng, 1, 8);
  set.active_threshold = UniformInt(rng, 0, 3) == 0 ? Uniform(rng, 0, 1) : UniformInt(rng, 0, 20) / 20.0;
  const int n = UniformInt(rng, 0, max_size);
  AnnotationId id = 0;
  for (int i = 0; i < n; ++i) {
    CircleAnnotation a;
    id += static_cast<AnnotationId>(UniformInt(rng, 1, 5));
    a.id = id;
    a.geometry = {Quantized(Uniform(rng, -50, 5000)), Quantized(Uniform(rng, -50, 5000)),
                  Quantized(Uniform(rng, 0.5, 300))};
    const int kind = UniformInt(rng, 0, 2);
    a.provenance = kind == 0 ? Provenance::kMachine
                             : (kind == 1 ? Provenance::kHumanAdded : Provenance::kHumanEdited);
    if (a.provenance == Provenance::kMachine ||
        (a.provenance == Provenance::kHumanEdited && UniformInt(rng, 0, 1) == 0)) {
      a.score = UniformInt(rng, 0, 4) == 0 ? UniformInt(rng, 0, 20) / 20.0 : Uniform(rng, 0, 1);
    }
    if (UniformInt(rng, 0, 2) == 0) a.class_label = RandomToken(rng, 1, 6);
    a.loop_index = UniformInt(rng, 0, 4);
    set.annotations.push_back(std::move(a));
  }
  std::shuffle(set.annotations.begin(), set.annotations.end(), rng);
  return set;
}

inline io::ClassConfig RandomClassConfig(std::mt19937_64& rng) {
  static const std::string keys = "123456789abcdefghijklmnopqrstuvwxyz";
  io::ClassConfig config;
  const int n = UniformInt(rng, 1, 8);
  std::string used_keys;
  std::vector<std::string> used_codes;
  while (static_cast<int>(config.classes.size()) < n) {
    io::ClassDefinition c;
    c.key = keys[UniformInt(rng, 0, static_cast<int>(keys.size()) - 1)];
    c.code = RandomToken(rng, 1, 6);
    if (used_keys.find(c.key) != std::string::npos ||
        std::find(used_codes.begin(), used_codes.end(), c.code) != used_codes.end()) {
      continue;
    }
    const int words = UniformInt(rng, 1, 3);
    for (int w = 0; w < words; ++w) c.name += (w ? " " : "") + RandomToken(rng, 1, 8);
    used_keys += c.key;
    used_codes.push_back(c.code);
    config.classes.push_back(std::move(c));
  }
  config.version = std::to_string(UniformInt(rng, 1, 9));
  return config;
}

inline std::vector<io::PatchLabelRecord> RandomLabels(std::mt19937_64& rng,
                                                      const io::ClassConfig& config) {
  std::vector<io::PatchLabelRecord> out;
  const int n = UniformInt(rng, 0, 20);
  for (int i = 0; i < n; ++i) {
    io::PatchLabelRecord r;
    r.slide_id = "s" + RandomToken(rng, 1, 6);
    r.annotation_id = static_cast<AnnotationId>(UniformInt(rng, 1, 100000));
    r.patch_file = r.slide_id + "_" + std::to_string(r.annotation_id) + ".png";
    r.class_code = config.classes[UniformInt(rng, 0, static_cast<int>(config.classes.size()) - 1)].code;
    r.labeled_at = Timestamp(static_cast<std::int64_t>(Uniform(rng, 1.5e12, 1.9e12)));
    r.labeler = UniformInt(rng, 0, 3) == 0 ? "" : RandomToken(rng, 1, 10);
    out.push_back(std::move(r));
  }
  return out;
}

struct ApFixture {
  std::vector<CircleAnnotation> dets;
  std::vector<CircleAnnotation> gts;
};

// Pairwise disjoint ground truth spanning all size buckets, detections that
// jitter, duplicate or miss it plus false positives. Scores are drawn from a
// coarse grid half the time to produce ties.
inline ApFixture RandomApFixture(std::mt19937_64& rng, int max_objects) {
  ApFixture f;
  const int ng = UniformInt(rng, 1, max_objects);
  int attempts = 0;
  while (static_cast<int>(f.gts.size()) < ng && attempts++ < 5000) {
    const double r = std::exp(Uniform(rng, std::log(4.0), std::log(90.0)));
    const Circle c{Uniform(rng, 0, 600), Uniform(rng, 0, 600), r};
    bool clear = true;
    for (const auto& g : f.gts) {
      clear = clear && std::hypot(g.geometry.cx - c.cx, g.geometry.cy - c.cy) > g.geometry.r + c.r;
    }
    if (!clear) continue;
    CircleAnnotation a;
    a.id = f.gts.size() + 1;
    a.geometry = c;
    a.provenance = Provenance::kHumanAdded;
    f.gts.push_back(a);
  }
  const bool grid = UniformInt(rng, 0, 1) == 0;
  auto score = [&] { return grid ? UniformInt(rng, 1, 10) / 10.0 : Uniform(rng, 0, 1); };
  auto add = [&](Circle c) {
    if (static_cast<int>(f.dets.size()) >= max_objects) return;
    CircleAnnotation d;
    d.id = f.dets.size() + 1;
    d.geometry = c;
    d.score = score();
    f.dets.push_back(d);
  };
  for (const auto& g : f.gts) {
    const int copies = UniformInt(rng, 0, 5) == 0 ? 2 : (UniformInt(rng, 0, 4) == 0 ? 0 : 1);
    for (int k = 0; k < copies; ++k) {
      const double r = g.geometry.r;
      add({g.geometry.cx + Uniform(rng, -0.35, 0.35) * r, g.geometry.cy + Uniform(rng, -0.35, 0.35) * r,
           r * Uniform(rng, 0.7, 1.3)});
    }
  }
  const int fps = UniformInt(rng, 0, 3);
  for (int k = 0; k < fps; ++k) {
    add({Uniform(rng, 0, 600), Uniform(rng, 0, 600), std::exp(Uniform(rng, std::log(4.0), std::log(90.0)))});
  }
  // Ids no longer follow vector order.
  std::vector<AnnotationId> ids;
  for (const auto& d : f.dets) ids.push_back(d.id);
  std::shuffle(ids.begin(), ids.end(), rng);
  for (std::size_t i = 0; i < ids.size(); ++i) f.dets[i].id = ids[i];
  std::shuffle(f.dets.begin(), f.dets.end(), rng);
  std::shuffle(f.gts.begin(), f.gts.end(), rng);
  return f;
}

}  // namespace loopcurate::testing
