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
#include "loopcurate/io/imagescope_xml.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "loopcurate/io/number_format.hpp"

namespace loopcurate::io {

std::string WriteImageScopeXml(const AnnotationSet& set, double microns_per_pixel) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<Annotations MicronsPerPixel=\"" + FormatScore(microns_per_pixel) + "\">\n";
  out += "  <Annotation Id=\"1\">\n";

  bool any = false;
  std::string regions;
  for (const auto& a : set.annotations) {
    if (!IsKept(a, set.active_threshold)) continue;
    any = true;
    const Circle& c = a.geometry;
    const std::string text = a.score ? std::string(kScorePrefix) + FormatScore(*a.score) : "";
    regions += "      <Region Id=\"" + std::to_string(a.id) + "\" Type=\"2\" Text=\"" +
               EscapeAttribute(text) + "\">\n";
    regions += "        <Vertices>\n";
    regions += "          <Vertex X=\"" + FormatCoordinate(c.cx - c.r) + "\" Y=\"" +
               FormatCoordinate(c.cy - c.r) + "\"/>\n";
    regions += "          <Vertex X=\"" + FormatCoordinate(c.cx + c.r) + "\" Y=\"" +
               FormatCoordinate(c.cy + c.r) + "\"/>\n";
    regions += "        </Vertices>\n";
    regions += "      </Region>\n";
  }
  if (any) {
    out += "    <Regions>\n" + regions + "    </Regions>\n";
  } else {
    out += "    <Regions/>\n";
  }
  out += "  </Annotation>\n";
  out += "</Annotations>\n";
  return out;
}

namespace {

double VertexCoord(const XmlElement& v, std::string_view key) {
  const std::string* text = v.Attribute(key);
  std::optional<double> value = text ? ParseNumber(*text) : std::nullopt;
  if (!value) {
    throw ValidationError("<Vertex> has a missing or invalid " + std::string(key), v.location());
  }
  return *value;
}

struct PendingRegion {
  std::optional<long long> region_id;
  CircleAnnotation annotation;
};

}  // namespace

ImageScopeImport ImportImageScopeXml(std::string_view bytes, std::string slide_id) {
  auto root = ParseXml(bytes);
  if (root->name != "Annotations") {
    throw ValidationError("root element must be <Annotations>, found <" + root->name + ">",
                          root->location());
  }
  ImageScopeImport result;
  result.set.slide_id = std::move(slide_id);
  if (const auto* mpp = root->Attribute("MicronsPerPixel")) {
    result.microns_per_pixel = ParseNumber(*mpp);
  }

  std::vector<PendingRegion> pending;
  for (const XmlElement* layer : root->Children("Annotation")) {
    for (const XmlElement* regions : layer->Children("Regions")) {
      for (const XmlElement* region : regions->Children("Region")) {
        const std::string* type_text = region->Attribute("Type");
        std::optional<long long> type = type_text ? ParseInteger(*type_text) : std::nullopt;
        if (!type || *type != kImageScopeEllipse) {
          ++result.skipped_regions;
          result.warnings.push_back(
              {"skipped region of type " + (type_text ? *type_text : std::string("<none>")) +
                   " (only ellipses are imported)",
               region->location()});
          continue;
        }
        std::vector<const XmlElement*> vertices;
        for (const XmlElement* vs : region->Children("Vertices")) {
          auto v = vs->Children("Vertex");
          vertices.insert(vertices.end(), v.begin(), v.end());
        }
        if (vertices.size() != 2) {
          throw ValidationError("ellipse region must have exactly 2 vertices, found " +
                                    std::to_string(vertices.size()),
                                region->location());
        }
        const double x0 = VertexCoord(*vertices[0], "X"), y0 = VertexCoord(*vertices[0], "Y");
        const double x1 = VertexCoord(*vertices[1], "X"), y1 = VertexCoord(*vertices[1], "Y");
        const double half_w = std::abs(x1 - x0) / 2.0;
        const double half_h = std::abs(y1 - y0) / 2.0;

        PendingRegion p;
        CircleAnnotation& a = p.annotation;
        a.geometry.cx = (x0 + x1) / 2.0;
        a.geometry.cy = (y0 + y1) / 2.0;
        if (half_w == half_h) {
          a.geometry.r = half_w;
        } else {
          a.geometry.r = (half_w + half_h) / 2.0;
          result.warnings.push_back(
              {"non-square ellipse coerced to a circle with the mean radius", region->location()});
        }
        if (!(a.geometry.r > 0.0)) {
          throw ValidationError("degenerate ellipse region (zero extent)", region->location());
        }

        a.provenance = Provenance::kHumanAdded;
        if (const auto* text = region->Attribute("Text");
            text && text->starts_with(kScorePrefix)) {
          auto score = ParseNumber(std::string_view(*text).substr(kScorePrefix.size()));
          if (score && *score >= 0.0 && *score <= 1.0) {
            a.score = *score;
            a.provenance = Provenance::kMachine;
          } else {
            result.warnings.push_back(
                {"region text '" + *text + "' has an invalid score (ignored)",
                 region->location()});
          }
        }
        if (const auto* id = region->Attribute("Id")) p.region_id = ParseInteger(*id);
        pending.push_back(std::move(p));
      }
    }
  }

  // Keep region ids where they are unique positive integers, number the rest
  // after the largest kept id.
  std::unordered_set<AnnotationId> used;
  std::vector<bool> keeps(pending.size(), false);
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const auto& rid = pending[i].region_id;
    if (rid && *rid > 0 && used.insert(static_cast<AnnotationId>(*rid)).second) keeps[i] = true;
  }
  AnnotationId next = used.empty() ? 1 : *std::max_element(used.begin(), used.end()) + 1;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    CircleAnnotation a = std::move(pending[i].annotation);
    a.id = keeps[i] ? static_cast<AnnotationId>(*pending[i].region_id) : next++;
    result.set.annotations.push_back(std::move(a));
  }
  return result;
}

}  // namespace loopcurate::io
