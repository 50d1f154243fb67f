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
#include "loopcurate/io/json_codec.hpp"

#include "loopcurate/core/error.hpp"

namespace loopcurate::io {

std::string CanonicalJson(const Json& value) { return value.dump(2) + "\n"; }

Json ParseJson(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(),
                     SourceLocation::At(1, static_cast<int>(e.byte)));
  }
}

const Json& RequireField(const Json& j, std::string_view key) {
  if (!j.is_object()) throw ValidationError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError("missing field '" + std::string(key) + "'");
  return *it;
}

std::string RequireString(const Json& j, std::string_view key) {
  const Json& v = RequireField(j, key);
  if (!v.is_string()) throw ValidationError("field '" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

double RequireNumber(const Json& j, std::string_view key) {
  const Json& v = RequireField(j, key);
  if (!v.is_number()) throw ValidationError("field '" + std::string(key) + "' must be a number");
  return v.get<double>();
}

long long RequireInteger(const Json& j, std::string_view key) {
  const Json& v = RequireField(j, key);
  if (!v.is_number_integer()) {
    throw ValidationError("field '" + std::string(key) + "' must be an integer");
  }
  return v.get<long long>();
}

namespace {

Json OptionalString(const std::optional<std::string>& s) { return s ? Json(*s) : Json(nullptr); }

std::optional<std::string> ReadOptionalString(const Json& j, std::string_view key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ValidationError("field '" + std::string(key) + "' must be a string");
  return it->get<std::string>();
}

AnnotationId ReadId(const Json& j, std::string_view key) {
  const long long v = RequireInteger(j, key);
  if (v < 0) throw ValidationError("field '" + std::string(key) + "' must be non-negative");
  return static_cast<AnnotationId>(v);
}

}  // namespace

Json ToJson(const Circle& c) { return Json{{"cx", c.cx}, {"cy", c.cy}, {"r", c.r}}; }

Circle CircleFromJson(const Json& j) {
  return {RequireNumber(j, "cx"), RequireNumber(j, "cy"), RequireNumber(j, "r")};
}

Json ToJson(const CircleAnnotation& a) {
  return Json{{"id", a.id},
              {"cx", a.geometry.cx},
              {"cy", a.geometry.cy},
              {"r", a.geometry.r},
              {"score", a.score ? Json(*a.score) : Json(nullptr)},
              {"class", OptionalString(a.class_label)},
              {"provenance", std::string(ProvenanceName(a.provenance))},
              {"loop", a.loop_index}};
}

CircleAnnotation AnnotationFromJson(const Json& j) {
  CircleAnnotation a;
  a.id = ReadId(j, "id");
  a.geometry = CircleFromJson(j);
  if (auto it = j.find("score"); it != j.end() && !it->is_null()) {
    if (!it->is_number()) throw ValidationError("field 'score' must be a number");
    a.score = it->get<double>();
  }
  a.class_label = ReadOptionalString(j, "class");
  try {
    a.provenance = ParseProvenance(RequireString(j, "provenance"));
  } catch (const DomainError& e) {
    throw ValidationError(e.message());
  }
  if (j.contains("loop")) a.loop_index = static_cast<int>(RequireInteger(j, "loop"));
  return a;
}

Json ToJson(const AnnotationSet& set) {
  Json items = Json::array();
  for (const auto& a : set.annotations) items.push_back(ToJson(a));
  return Json{{"slide_id", set.slide_id},
              {"threshold", set.active_threshold},
              {"annotations", std::move(items)}};
}

AnnotationSet AnnotationSetFromJson(const Json& j) {
  AnnotationSet set;
  set.slide_id = RequireString(j, "slide_id");
  set.active_threshold = RequireNumber(j, "threshold");
  const Json& items = RequireField(j, "annotations");
  if (!items.is_array()) throw ValidationError("field 'annotations' must be an array");
  for (const auto& item : items) set.annotations.push_back(AnnotationFromJson(item));
  return set;
}

Json ToJson(const AnnotationEdit& e) {
  return Json{{"kind", std::string(EditKindName(e.kind))},
              {"target_id", e.target_id ? Json(*e.target_id) : Json(nullptr)},
              {"circle", e.circle ? ToJson(*e.circle) : Json(nullptr)},
              {"class_label", OptionalString(e.class_label)},
              {"loop", e.loop_index},
              {"timestamp", e.timestamp.ToString()}};
}

AnnotationEdit EditFromJson(const Json& j) {
  AnnotationEdit e;
  try {
    e.kind = ParseEditKind(RequireString(j, "kind"));
  } catch (const DomainError& err) {
    throw ValidationError(err.message());
  }
  if (auto it = j.find("target_id"); it != j.end() && !it->is_null()) {
    e.target_id = ReadId(j, "target_id");
  }
  if (auto it = j.find("circle"); it != j.end() && !it->is_null()) {
    e.circle = CircleFromJson(*it);
  }
  e.class_label = ReadOptionalString(j, "class_label");
  if (j.contains("loop")) e.loop_index = static_cast<int>(RequireInteger(j, "loop"));
  if (j.contains("timestamp")) {
    try {
      e.timestamp = Timestamp::Parse(RequireString(j, "timestamp"));
    } catch (const DomainError& err) {
      throw ValidationError(err.message());
    }
  } else {
    e.timestamp = Timestamp::Now();
  }
  return e;
}

Json ToJson(const ClassConfig& config) {
  Json classes = Json::array();
  for (const auto& c : config.classes) {
    classes.push_back(Json{{"key", std::string(1, c.key)}, {"code", c.code}, {"name", c.name}});
  }
  return Json{{"version", config.version}, {"classes", std::move(classes)}};
}

ClassConfig ClassConfigFromJson(const Json& j) {
  ClassConfig config;
  if (j.contains("version")) config.version = RequireString(j, "version");
  const Json& classes = RequireField(j, "classes");
  if (!classes.is_array()) throw ValidationError("field 'classes' must be an array");
  for (const auto& c : classes) {
    const std::string key = RequireString(c, "key");
    if (key.size() != 1) throw ValidationError("class key must be a single character");
    config.classes.push_back({key.front(), RequireString(c, "code"), RequireString(c, "name")});
  }
  ValidateClassConfig(config);
  return config;
}

Json ToJson(const PatchLabelRecord& r) {
  return Json{{"annotation_id", r.annotation_id}, {"class_code", r.class_code},
              {"labeled_at", r.labeled_at.ToString()}, {"labeler", r.labeler},
              {"patch_file", r.patch_file}, {"slide_id", r.slide_id}};
}

PatchLabelRecord PatchLabelFromJson(const Json& j) {
  PatchLabelRecord r;
  r.annotation_id = ReadId(j, "annotation_id");
  r.class_code = RequireString(j, "class_code");
  try {
    r.labeled_at = Timestamp::Parse(RequireString(j, "labeled_at"));
  } catch (const DomainError& err) {
    throw ValidationError(err.message());
  }
  r.labeler = RequireString(j, "labeler");
  r.patch_file = RequireString(j, "patch_file");
  r.slide_id = RequireString(j, "slide_id");
  return r;
}

Json ToJson(const CurationDiff& d) {
  return Json{{"added", d.added}, {"deleted", d.deleted}, {"moved", d.moved},
              {"unchanged", d.unchanged}, {"reclassified", d.reclassified}};
}

}  // namespace loopcurate::io
