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

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "loopcurate/core/error.hpp"

namespace loopcurate::io {

// Minimal element tree produced by the expat-backed reader. Text content is
// discarded; both annotation formats carry everything in attributes.
struct XmlElement {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<std::unique_ptr<XmlElement>> children;
  int line = 0;
  int column = 0;

  const std::string* Attribute(std::string_view key) const;
  std::vector<const XmlElement*> Children(std::string_view name) const;
  const XmlElement* FirstChild(std::string_view name) const;
  SourceLocation location() const { return SourceLocation::At(line, column); }
};

// Parses a complete document. Throws ParseError with the expat line/column
// on malformed input.
std::unique_ptr<XmlElement> ParseXml(std::string_view bytes);

// Escapes &, <, >, " and the whitespace characters that attribute-value
// normalization would otherwise fold.
std::string EscapeAttribute(std::string_view value);

// A non-fatal issue found while reading a document.
struct Warning {
  std::string message;
  SourceLocation location;

  bool operator==(const Warning& o) const { return message == o.message; }
};

}  // namespace loopcurate::io
