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
#include "loopcurate/detect/detector.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <numbers>
#include <unordered_map>

#include "loopcurate/core/error.hpp"
#include "loopcurate/detect/blob.hpp"
#include "loopcurate/io/file_util.hpp"
#include "loopcurate/io/native_xml.hpp"
#include "loopcurate/io/number_format.hpp"

namespace loopcurate::detect {

namespace fs = std::filesystem;

std::string_view DetectorKindName(DetectorKind kind) {
  return kind == DetectorKind::kBuiltinBlob ? "BUILTIN_BLOB" : "EXTERNAL";
}

DetectorKind ParseDetectorKind(std::string_view name) {
  if (name == "BUILTIN_BLOB") return DetectorKind::kBuiltinBlob;
  if (name == "EXTERNAL") return DetectorKind::kExternal;
  throw DomainError("unknown detector kind '" + std::string(name) + "'");
}

DetectorSpec DetectorSpec::Builtin(int intensity_threshold, double min_radius, double max_radius,
                                   std::string version_tag) {
  DetectorSpec spec;
  spec.kind = DetectorKind::kBuiltinBlob;
  spec.params[kIntensityThreshold] = std::to_string(intensity_threshold);
  spec.params[kMinRadius] = io::FormatScore(min_radius);
  spec.params[kMaxRadius] = io::FormatScore(max_radius);
  spec.version_tag = std::move(version_tag);
  return spec;
}

DetectorSpec DetectorSpec::External(std::string command, std::string version_tag) {
  DetectorSpec spec;
  spec.kind = DetectorKind::kExternal;
  spec.params[kCommand] = std::move(command);
  spec.version_tag = std::move(version_tag);
  return spec;
}

namespace {

struct BuiltinParams {
  int intensity_threshold;
  double min_radius;
  double max_radius;
};

const std::string& Param(const DetectorSpec& spec, const char* key) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) {
    throw DomainError(std::string("detector parameter '") + key + "' is required");
  }
  return it->second;
}

double NumberParam(const DetectorSpec& spec, const char* key) {
  auto v = io::ParseNumber(Param(spec, key));
  if (!v) throw DomainError(std::string("detector parameter '") + key + "' must be a number");
  return *v;
}

BuiltinParams ReadBuiltin(const DetectorSpec& spec) {
  BuiltinParams p;
  auto thr = io::ParseInteger(Param(spec, kIntensityThreshold));
  if (!thr || *thr < 1 || *thr > 256) {
    throw DomainError("intensity_threshold must be an integer in [1,256]");
  }
  p.intensity_threshold = static_cast<int>(*thr);
  p.min_radius = NumberParam(spec, kMinRadius);
  p.max_radius = NumberParam(spec, kMaxRadius);
  if (p.min_radius < 0.0 || p.max_radius < p.min_radius) {
    throw DomainError("radius range must satisfy 0 <= min_radius <= max_radius");
  }
  return p;
}

double Quantize(double v) { return std::round(v * 1e4) / 1e4; }

AnnotationSet DetectBuiltin(const slide::SlideHandle& slide, const BuiltinParams& p,
                            int loop_index) {
  const int level = slide.coarsest_level();
  const slide::LevelInfo& info = slide.level(level);
  const slide::PatchImage raster = slide::ReadRegion(slide, level, 0, 0, info.width, info.height);
  const auto mask = DarkMask(raster.pixels, p.intensity_threshold);
  const auto components = ConnectedComponents(mask, info.width, info.height);
  const double scale = info.downsample;

  struct Candidate {
    Circle circle;
    double score;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < components.size(); ++i) {
    const Component& comp = components[i];
    Circle c = MinimumEnclosingCircle(comp.boundary);
    c.r += 0.5;
    const double score =
        std::clamp(static_cast<double>(comp.area) / (std::numbers::pi * c.r * c.r), 0.0, 1.0);
    const Circle level0{Quantize(c.cx * scale), Quantize(c.cy * scale), Quantize(c.r * scale)};
    if (level0.r < p.min_radius || level0.r > p.max_radius || !(level0.r > 0.0)) continue;
    candidates.push_back({level0, score});
  }

  std::vector<std::size_t> by_score(candidates.size());
  for (std::size_t i = 0; i < by_score.size(); ++i) by_score[i] = i;
  std::stable_sort(by_score.begin(), by_score.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].score > candidates[b].score;
  });
  std::vector<bool> keep(candidates.size(), false);
  std::vector<std::size_t> kept;
  for (std::size_t idx : by_score) {
    const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return CircleIou(candidates[idx].circle, candidates[k].circle) > kDuplicateIou;
    });
    if (duplicate) continue;
    keep[idx] = true;
    kept.push_back(idx);
  }

  AnnotationSet out;
  out.slide_id = slide.slide_id();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!keep[i]) continue;
    CircleAnnotation a;
    a.id = out.annotations.size() + 1;
    a.geometry = candidates[i].circle;
    a.score = candidates[i].score;
    a.provenance = Provenance::kMachine;
    a.loop_index = loop_index;
    out.annotations.push_back(std::move(a));
  }
  return out;
}

std::string ShellQuote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::string Expand(std::string command, const std::string& slide, const std::string& out) {
  bool used = false;
  for (const auto& [token, value] : {std::pair<std::string, std::string>{"{slide}", slide},
                                     std::pair<std::string, std::string>{"{out}", out}}) {
    for (std::size_t pos = command.find(token); pos != std::string::npos;
         pos = command.find(token, pos + value.size())) {
      command.replace(pos, token.size(), ShellQuote(value));
      used = true;
    }
  }
  if (!used) command += " " + ShellQuote(slide) + " " + ShellQuote(out);
  return command;
}

std::mutex& SlideMutex(const std::string& key) {
  static std::mutex registry_mutex;
  static std::unordered_map<std::string, std::unique_ptr<std::mutex>> registry;
  std::lock_guard lock(registry_mutex);
  auto& slot = registry[key];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

AnnotationSet DetectExternal(const slide::SlideHandle& slide, const DetectorSpec& spec,
                             int loop_index) {
  const std::string descriptor = (slide.source() / slide::kDescriptorName).string();
  std::lock_guard serial(SlideMutex(descriptor));

  const fs::path out = fs::temp_directory_path() /
                       ("loopcurate-detect-" + std::to_string(::getpid()) + "-" +
                        std::to_string(std::hash<std::string>{}(descriptor)) + ".xml");
  std::error_code ec;
  fs::remove(out, ec);
  const std::string command = Expand(Param(spec, kCommand), descriptor, out.string());
  const int status = std::system(command.c_str());
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    fs::remove(out, ec);
    throw DetectorError("external detector failed (status " + std::to_string(status) +
                        "): " + command);
  }

  AnnotationSet set;
  try {
    set = io::ParseNativeXml(io::ReadFile(out)).set;
  } catch (const Error& e) {
    fs::remove(out, ec);
    throw DetectorError("external detector produced unusable output: " + std::string(e.what()));
  }
  fs::remove(out, ec);

  set.slide_id = slide.slide_id();
  for (auto& a : set.annotations) {
    if (a.provenance != Provenance::kMachine || !a.score) {
      throw DetectorError("external detector output contains a non-machine annotation (id " +
                          std::to_string(a.id) + ")");
    }
    a.loop_index = loop_index;
  }
  return set;
}

}  // namespace

void ValidateDetectorSpec(const DetectorSpec& spec) {
  if (spec.version_tag.empty()) throw DomainError("detector version_tag must be non-empty");
  if (spec.kind == DetectorKind::kBuiltinBlob) {
    ReadBuiltin(spec);
  } else if (Param(spec, kCommand).empty()) {
    throw DomainError("external detector command must be non-empty");
  }
}

io::Json ToJson(const DetectorSpec& spec) {
  io::Json params = io::Json::object();
  for (const auto& [k, v] : spec.params) params[k] = v;
  return {{"kind", std::string(DetectorKindName(spec.kind))},
          {"params", std::move(params)},
          {"version_tag", spec.version_tag}};
}

DetectorSpec DetectorSpecFromJson(const io::Json& j) {
  DetectorSpec spec;
  try {
    spec.kind = ParseDetectorKind(io::RequireString(j, "kind"));
  } catch (const DomainError& e) {
    throw ValidationError(e.message());
  }
  if (auto it = j.find("params"); it != j.end()) {
    if (!it->is_object()) throw ValidationError("detector 'params' must be an object");
    for (const auto& [k, v] : it->items()) {
      spec.params[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
  }
  spec.version_tag = io::RequireString(j, "version_tag");
  return spec;
}

AnnotationSet Detect(const slide::SlideHandle& slide, const DetectorSpec& spec, int loop_index) {
  ValidateDetectorSpec(spec);
  AnnotationSet set = spec.kind == DetectorKind::kBuiltinBlob
                          ? DetectBuiltin(slide, ReadBuiltin(spec), loop_index)
                          : DetectExternal(slide, spec, loop_index);
  ValidateSet(set);
  return set;
}

}  // namespace loopcurate::detect
