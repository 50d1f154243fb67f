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
#include "loopcurate/core/timestamp.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

#include "loopcurate/core/error.hpp"

namespace loopcurate {

Timestamp Timestamp::Now() {
  const auto now = std::chrono::system_clock::now();
  return Timestamp(
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count());
}

std::string Timestamp::ToString() const {
  std::int64_t secs = millis_ / 1000;
  std::int64_t ms = millis_ % 1000;
  if (ms < 0) {
    ms += 1000;
    secs -= 1;
  }
  const std::time_t t = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<int>(ms));
  return buf;
}

Timestamp Timestamp::Parse(std::string_view text) {
  const std::string s(text);
  int year, mon, day, hour, min, sec, ms = 0;
  int consumed = 0;
  bool ok = false;
  if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%3dZ%n", &year, &mon, &day, &hour, &min,
                  &sec, &ms, &consumed) == 7 &&
      consumed == static_cast<int>(s.size()) && s.size() == 24) {
    ok = true;
  } else if (ms = 0, consumed = 0,
             std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2dZ%n", &year, &mon, &day, &hour, &min,
                         &sec, &consumed) == 6 &&
                 consumed == static_cast<int>(s.size()) && s.size() == 20) {
    ok = true;
  }
  if (!ok || mon < 1 || mon > 12 || day < 1 || day > 31 || hour > 23 || min > 59 || sec > 60) {
    throw DomainError("invalid timestamp '" + s + "'");
  }
  std::tm tm{};
  tm.tm_year = year - 1900;
  tm.tm_mon = mon - 1;
  tm.tm_mday = day;
  tm.tm_hour = hour;
  tm.tm_min = min;
  tm.tm_sec = sec;
  const std::time_t secs = timegm(&tm);
  return Timestamp(static_cast<std::int64_t>(secs) * 1000 + ms);
}

}  // namespace loopcurate
