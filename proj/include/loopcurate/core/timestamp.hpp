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

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace loopcurate {

// Wall-clock instant with millisecond resolution, serialized as
// "YYYY-MM-DDTHH:MM:SS.mmmZ" (UTC).
class Timestamp {
 public:
  constexpr Timestamp() = default;
  constexpr explicit Timestamp(std::int64_t millis_since_epoch) : millis_(millis_since_epoch) {}

  static Timestamp Now();
  // Accepts the canonical form and the same form without the fractional part.
  // Throws DomainError on anything else.
  static Timestamp Parse(std::string_view text);

  constexpr std::int64_t millis() const { return millis_; }
  std::string ToString() const;

  auto operator<=>(const Timestamp&) const = default;

 private:
  std::int64_t millis_ = 0;
};

}  // namespace loopcurate
