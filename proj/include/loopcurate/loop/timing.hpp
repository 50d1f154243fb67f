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

#include <optional>
#include <span>
#include <string>

#include "loopcurate/core/timestamp.hpp"
#include "loopcurate/io/json_codec.hpp"

namespace loopcurate::loop {

enum class TimingMode { kPureManual, kAssisted };

std::string_view TimingModeName(TimingMode mode);
TimingMode ParseTimingMode(std::string_view name);

inline constexpr double kDefaultIdleGapSeconds = 60.0;

struct TimingSample {
  std::string slide_id;
  int loop_index = 1;
  TimingMode mode = TimingMode::kPureManual;
  long objects_curated = 0;
  double active_seconds = 0.0;
  bool operator==(const TimingSample&) const = default;
};

// Throws DomainError unless objects_curated > 0 and active_seconds is finite
// and non-negative.
void ValidateTimingSample(const TimingSample& sample);

struct TimingStats {
  std::size_t sample_count = 0;
  std::optional<double> manual_seconds_per_object;
  std::optional<double> assisted_seconds_per_object;
  std::optional<double> labor_reduction;
};

// Per mode: sum of active seconds over sum of objects.
TimingStats ComputeTimingStats(std::span<const TimingSample> samples);

// (manual - assisted) / manual. Negative when assistance is slower. Throws
// DomainError unless manual_spo > 0.
double LaborReduction(double manual_spo, double assisted_spo);

// Sum of gaps between consecutive events (sorted) that do not exceed
// idle_gap_seconds.
double ActiveSeconds(std::span<const Timestamp> events,
                     double idle_gap_seconds = kDefaultIdleGapSeconds);

io::Json ToJson(const TimingSample& s);
TimingSample TimingSampleFromJson(const io::Json& j);
io::Json ToJson(const TimingStats& s);

}  // namespace loopcurate::loop
