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
#include <vector>

#include "loopcurate/core/annotation.hpp"
#include "loopcurate/io/xml.hpp"

namespace loopcurate::io {

inline constexpr int kImageScopeEllipse = 2;
inline constexpr std::string_view kScorePrefix = "score:";

// Aperio ImageScope annotation document with one annotation layer. Each
// circle kept at set.active_threshold becomes an ellipse region (Type="2")
// whose two vertices are the bounding-square corners; a detection score is
// stored in the region Text as "score:<value>".
//
//   <Annotations MicronsPerPixel="0.25">
//     <Annotation Id="1">
//       <Regions>
//         <Region Id="7" Type="2" Text="score:0.87">
//           <Vertices>
//             <Vertex X="50" Y="50"/>
//             <Vertex X="150" Y="150"/>
//           </Vertices>
//         </Region>
//       </Regions>
//     </Annotation>
//   </Annotations>
std::string WriteImageScopeXml(const AnnotationSet& set, double microns_per_pixel);

struct ImageScopeImport {
  AnnotationSet set;
  std::optional<double> microns_per_pixel;
  std::vector<Warning> warnings;
  int skipped_regions = 0;
};

// Ellipse regions become circles: a square bounding box maps to its inscribed
// circle; a non-square one to the circle with the mean of the half-extents as
// radius (plus a warning). Other region types are skipped with a warning.
// Regions with a "score:" text import as MACHINE detections, the rest as
// HUMAN_ADDED. Region Id is kept as the annotation id when it is a unique
// positive integer.
// Throws ParseError for malformed XML, ValidationError when an ellipse does
// not have exactly two vertices.
ImageScopeImport ImportImageScopeXml(std::string_view bytes, std::string slide_id);

}  // namespace loopcurate::io
