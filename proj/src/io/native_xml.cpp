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
#include "loopcurate/io/native_xml.hpp"

#include <cstdint>
#include <unordered_set>

#include "loopcurate/io/number_format.hpp"

namespace loopcurate::io {

namespace {

constexpr std::string_view kRoot = "EasierSet";
constexpr std::string_view kObjects = "Objects";
constexpr std::string_view kCircle = "Circle";

}  // namespace

std::string WriteNativeXml(const AnnotationSet& set) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<EasierSet slide_id=\"" + EscapeAttribute(set.slide_id) + "\" threshold=\"" +
         FormatScore(set.active_threshold) + "\">\n";
  if (set.annotations.empty()) {
    out += "  <Objects/>\n";
  } else {
    out += "  <Objects>\n";
    for (const auto& a : set.annotations) {
      out += "    <Circle cx=\"" + FormatCoordinate(a.geometry.cx) + "\" cy=\"" +
             FormatCoordinate(a.geometry.cy) + "\" r=\"" + FormatCoordinate(a.geometry.r) + "\"";
      if (a.score) out += " score=\"" + FormatScore(*a.score) + "\"";
      if (a.class_label) out += " class=\"" + EscapeAttribute(*a.class_label) + "\"";
      out += " provenance=\"" + std::string(ProvenanceName(a.provenance)) + "\" id=\"" +
             std::to_string(a.id) + "\" loop=\"" + std::to_string(a.loop_index) + "\"/>\n";
    }
    out += "  </Objects>\n";
  }
  out += "</EasierSet>\n";
  return out;
}

namespace {

std::string Describe(const XmlElement& e) {
  std::string who = "<" + e.name;
  if (const auto* id = e.Attribute("id")) who += " id=\"" + *id + "\"";
  return who + ">";
}

const std::string& Required(const XmlElement& e, std::string_view key) {
  const std::string* v = e.Attribute(key);
  if (!v) {
    throw ValidationError(Describe(e) + " is missing attribute '" + std::string(key) + "'",
                          e.location());
  }
  return *v;
}

double RequiredNumber(const XmlElement& e, std::string_view key) {
  const std::string& text = Required(e, key);
  auto v = ParseNumber(text);
  if (!v) {
    throw ValidationError(Describe(e) + " attribute '" + std::string(key) + "' is not a number: '" +
                              text + "'",
                          e.location());
  }
  return *v;
}

CircleAnnotation ReadCircle(const XmlElement& e, std::vector<Warning>& warnings) {
  static const std::unordered_set<std::string_view> kKnown = {
      "cx", "cy", "r", "score", "class", "provenance", "id", "loop"};
  for (const auto& [key, value] : e.attributes) {
    if (!kKnown.contains(key)) {
      warnings.push_back({Describe(e) + " has unknown attribute '" + key + "' (ignored)",
                          e.location()});
    }
  }

  CircleAnnotation a;
  const std::string& id_text = Required(e, "id");
  auto id = ParseInteger(id_text);
  if (!id || *id < 0) {
    throw ValidationError(Describe(e) + " has an invalid id", e.location());
  }
  a.id = static_cast<AnnotationId>(*id);
  a.geometry = {RequiredNumber(e, "cx"), RequiredNumber(e, "cy"), RequiredNumber(e, "r")};
  if (!(a.geometry.r > 0.0)) {
    throw ValidationError(Describe(e) + " radius must be positive", e.location());
  }
  if (e.Attribute("score")) {
    const double s = RequiredNumber(e, "score");
    if (s < 0.0 || s > 1.0) {
      throw ValidationError(Describe(e) + " score must be in [0,1]", e.location());
    }
    a.score = s;
  }
  if (const auto* cls = e.Attribute("class")) a.class_label = *cls;
  try {
    a.provenance = ParseProvenance(Required(e, "provenance"));
  } catch (const DomainError& err) {
    throw ValidationError(Describe(e) + " " + err.message(), e.location());
  }
  if (const auto* loop = e.Attribute("loop")) {
    auto v = ParseInteger(*loop);
    if (!v || *v < 0 || *v > INT32_MAX) {
      throw ValidationError(Describe(e) + " has an invalid loop index", e.location());
    }
    a.loop_index = static_cast<int>(*v);
  }
  try {
    ValidateAnnotation(a);
  } catch (const DomainError& err) {
    throw ValidationError(Describe(e) + " " + err.message(), e.location());
  }
  return a;
}

}  // namespace

NativeParseResult ParseNativeXml(std::string_view bytes) {
  auto root = ParseXml(bytes);
  if (root->name != kRoot) {
    throw ValidationError("root element must be <EasierSet>, found <" + root->name + ">",
                          root->location());
  }
  NativeParseResult result;
  result.set.slide_id = Required(*root, "slide_id");
  result.set.active_threshold = RequiredNumber(*root, "threshold");
  if (result.set.active_threshold < 0.0 || result.set.active_threshold > 1.0) {
    throw ValidationError("threshold must be in [0,1]", root->location());
  }
  for (const auto& [key, value] : root->attributes) {
    if (key != "slide_id" && key != "threshold") {
      result.warnings.push_back(
          {"<EasierSet> has unknown attribute '" + key + "' (ignored)", root->location()});
    }
  }

  std::unordered_set<AnnotationId> seen;
  for (const auto& child : root->children) {
    if (child->name != kObjects) {
      result.warnings.push_back(
          {"unknown element <" + child->name + "> (ignored)", child->location()});
      continue;
    }
    for (const auto& e : child->children) {
      if (e->name != kCircle) {
        result.warnings.push_back(
            {"unknown element <" + e->name + "> (ignored)", e->location()});
        continue;
      }
      CircleAnnotation a = ReadCircle(*e, result.warnings);
      if (!seen.insert(a.id).second) {
        throw ValidationError(Describe(*e) + " duplicates an earlier id", e->location());
      }
      result.set.annotations.push_back(std::move(a));
    }
  }
  return result;
}

}  // namespace loopcurate::io
