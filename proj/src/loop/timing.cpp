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
#include "loopcurate/loop/timing.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "loopcurate/core/error.hpp"

namespace loopcurate::loop {

std::string_view TimingModeName(TimingMode mode) {
  return mode == TimingMode::kPureManual ? "PURE_MANUAL" : "ASSISTED";
}

TimingMode ParseTimingMode(std::string_view name) {
  if (name == "PURE_MANUAL") return TimingMode::kPureManual;
  if (name == "ASSISTED") return TimingMode::kAssisted;
  throw DomainError("unknown timing mode '" + std::string(name) + "'");
}

void ValidateTimingSample(const TimingSample& s) {
  if (s.objects_curated <= 0) throw DomainError("objects_curated must be positive");
  if (!std::isfinite(s.active_seconds) || s.active_seconds < 0.0) {
    throw DomainError("active_seconds must be finite and non-negative");
  }
  if (s.loop_index < 1) throw DomainError("loop_index must be positive");
}

TimingStats ComputeTimingStats(std::span<const TimingSample> samples) {
  TimingStats stats;
  stats.sample_count = samples.size();
  double seconds[2] = {0.0, 0.0};
  long objects[2] = {0, 0};
  for (const auto& s : samples) {
    const int m = s.mode == TimingMode::kPureManual ? 0 : 1;
    seconds[m] += s.active_seconds;
    objects[m] += s.objects_curated;
  }
  if (objects[0] > 0) stats.manual_seconds_per_object = seconds[0] / objects[0];
  if (objects[1] > 0) stats.assisted_seconds_per_object = seconds[1] / objects[1];
  if (stats.manual_seconds_per_object && stats.assisted_seconds_per_object &&
      *stats.manual_seconds_per_object > 0.0) {
    stats.labor_reduction =
        LaborReduction(*stats.manual_seconds_per_object, *stats.assisted_seconds_per_object);
  }
  return stats;
}

double LaborReduction(double manual_spo, double assisted_spo) {
  if (!(manual_spo > 0.0) || !std::isfinite(manual_spo)) {
    throw DomainError("manual seconds per object must be positive");
  }
  return (manual_spo - assisted_spo) / manual_spo;
}

double ActiveSeconds(std::span<const Timestamp> events, double idle_gap_seconds) {
  std::vector<Timestamp> sorted(events.begin(), events.end());
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double gap = static_cast<double>(sorted[i].millis() - sorted[i - 1].millis()) / 1000.0;
    if (gap <= idle_gap_seconds) total += gap;
  }
  return total;
}

io::Json ToJson(const TimingSample& s) {
  return {{"slide_id", s.slide_id},
          {"loop_index", s.loop_index},
          {"mode", std::string(TimingModeName(s.mode))},
          {"objects_curated", s.objects_curated},
          {"active_seconds", s.active_seconds}};
}

TimingSample TimingSampleFromJson(const io::Json& j) {
  TimingSample s;
  s.slide_id = j.contains("slide_id") ? io::RequireString(j, "slide_id") : "";
  s.loop_index = j.contains("loop_index") ? static_cast<int>(io::RequireInteger(j, "loop_index")) : 1;
  try {
    s.mode = ParseTimingMode(io::RequireString(j, "mode"));
  } catch (const DomainError& e) {
    throw ValidationError(e.message());
  }
  s.objects_curated = static_cast<long>(io::RequireInteger(j, "objects_curated"));
  s.active_seconds = io::RequireNumber(j, "active_seconds");
  return s;
}

io::Json ToJson(const TimingStats& s) {
  auto opt = [](const std::optional<double>& v) { return v ? io::Json(*v) : io::Json(nullptr); };
  return {{"sample_count", s.sample_count},
          {"manual_seconds_per_object", opt(s.manual_seconds_per_object)},
          {"assisted_seconds_per_object", opt(s.assisted_seconds_per_object)},
          {"labor_reduction", opt(s.labor_reduction)}};
}

}  // namespace loopcurate::loop
