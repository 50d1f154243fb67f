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
#include <string>
#include <string_view>

namespace loopcurate::io {

// Fixed notation, at most four fractional digits (round half to even on the
// exact binary value), trailing zeros and a trailing point removed, never an
// exponent. -0 renders as "0".
std::string FormatCoordinate(double value);

// Shortest fixed-notation text that parses back to exactly `value`.
std::string FormatScore(double value);

// Strict decimal parse of the whole string (no leading '+', no whitespace,
// finite result). Returns nullopt on failure.
std::optional<double> ParseNumber(std::string_view text);
std::optional<long long> ParseInteger(std::string_view text);

}  // namespace loopcurate::io
