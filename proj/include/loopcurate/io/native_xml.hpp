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

#include <string>
#include <string_view>
#include <vector>

#include "loopcurate/core/annotation.hpp"
#include "loopcurate/io/xml.hpp"

namespace loopcurate::io {

// Native score-bearing annotation document:
//
//   <?xml version="1.0" encoding="UTF-8"?>
//   <EasierSet slide_id="S1" threshold="0.5">
//     <Objects>
//       <Circle cx="100" cy="100" r="50" score="0.87" class="GDG" provenance="MACHINE" id="1" loop="1"/>
//     </Objects>
//   </EasierSet>
//
// Two-space indentation, LF line endings, attribute order as shown; score
// and class are omitted when absent. Geometry is written with at most four
// fractional digits, scores and the threshold with the shortest exact form.
std::string WriteNativeXml(const AnnotationSet& set);

struct NativeParseResult {
  AnnotationSet set;
  std::vector<Warning> warnings;
};

// Inverse of WriteNativeXml. Unknown attributes and elements are skipped with
// a warning. Throws ParseError for malformed XML and ValidationError (with the
// element's location) for invariant violations.
NativeParseResult ParseNativeXml(std::string_view bytes);

}  // namespace loopcurate::io
