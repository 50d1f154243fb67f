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

#include "json.hpp"
#include "loopcurate/core/annotation.hpp"
#include "loopcurate/core/edit.hpp"
#include "loopcurate/io/class_config.hpp"
#include "loopcurate/io/patch_labels.hpp"

namespace loopcurate::io {

using Json = nlohmann::json;

// Sorted keys (nlohmann's default object map), two-space indent, trailing LF.
std::string CanonicalJson(const Json& value);

// Parses JSON text; throws ParseError carrying the byte offset as column.
Json ParseJson(std::string_view text);

Json ToJson(const Circle& c);
Circle CircleFromJson(const Json& j);

Json ToJson(const CircleAnnotation& a);
CircleAnnotation AnnotationFromJson(const Json& j);

Json ToJson(const AnnotationSet& set);
AnnotationSet AnnotationSetFromJson(const Json& j);

Json ToJson(const AnnotationEdit& edit);
AnnotationEdit EditFromJson(const Json& j);

Json ToJson(const ClassConfig& config);
ClassConfig ClassConfigFromJson(const Json& j);

Json ToJson(const PatchLabelRecord& record);
PatchLabelRecord PatchLabelFromJson(const Json& j);

Json ToJson(const CurationDiff& diff);

// Typed field access that reports the field name on failure (ValidationError).
const Json& RequireField(const Json& j, std::string_view key);
std::string RequireString(const Json& j, std::string_view key);
double RequireNumber(const Json& j, std::string_view key);
long long RequireInteger(const Json& j, std::string_view key);

}  // namespace loopcurate::io
