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
#include "loopcurate/io/class_config.hpp"

#include <algorithm>
#include <set>

#include "loopcurate/core/error.hpp"

namespace loopcurate::io {

const ClassDefinition* ClassConfig::FindByCode(std::string_view code) const {
  auto it = std::find_if(classes.begin(), classes.end(),
                         [&](const ClassDefinition& c) { return c.code == code; });
  return it == classes.end() ? nullptr : &*it;
}

const ClassDefinition* ClassConfig::FindByKey(char key) const {
  auto it = std::find_if(classes.begin(), classes.end(),
                         [&](const ClassDefinition& c) { return c.key == key; });
  return it == classes.end() ? nullptr : &*it;
}

namespace {

constexpr std::string_view kVersionDirective = "@version";

bool IsKeyChar(char c) { return c > ' ' && c < 0x7f && c != '#'; }

bool HasControl(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; });
}

bool HasSpace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return c <= ' '; });
}

void CheckDefinition(const ClassDefinition& c, std::optional<SourceLocation> where) {
  if (!IsKeyChar(c.key)) {
    throw ValidationError("class key must be a single printable character other than '#'", where);
  }
  if (c.code.empty() || HasSpace(c.code)) {
    throw ValidationError("class code must be non-empty without whitespace", where);
  }
  if (c.name.empty() || HasControl(c.name)) {
    throw ValidationError("class name must be non-empty without tabs or newlines", where);
  }
}

}  // namespace

void ValidateClassConfig(const ClassConfig& config) {
  if (config.classes.empty()) throw ValidationError("no classes defined");
  if (config.version.empty() || HasControl(config.version)) {
    throw ValidationError("class config version must be a non-empty single-line string");
  }
  std::set<char> keys;
  std::set<std::string> codes;
  for (std::size_t i = 0; i < config.classes.size(); ++i) {
    const auto& c = config.classes[i];
    const auto where = SourceLocation::Record(static_cast<int>(i));
    CheckDefinition(c, where);
    if (!keys.insert(c.key).second) {
      throw ValidationError(std::string("duplicate class key '") + c.key + "'", where);
    }
    if (!codes.insert(c.code).second) {
      throw ValidationError("duplicate class code '" + c.code + "'", where);
    }
  }
}

ClassConfig LoadClassConfig(std::string_view text) {
  ClassConfig config;
  std::set<char> keys;
  std::set<std::string> codes;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    const auto where = SourceLocation::Line(line_no);
    const std::size_t tab1 = line.find('\t');
    if (tab1 != std::string_view::npos && line.substr(0, tab1) == kVersionDirective) {
      config.version = std::string(line.substr(tab1 + 1));
      if (config.version.empty() || HasControl(config.version)) {
        throw ValidationError("empty @version value", where);
      }
      continue;
    }
    const std::size_t tab2 = tab1 == std::string_view::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab2 == std::string_view::npos) {
      throw ValidationError("expected key<TAB>code<TAB>name", where);
    }
    const std::string_view key = line.substr(0, tab1);
    if (key.size() != 1) throw ValidationError("class key must be a single character", where);
    ClassDefinition def{key.front(), std::string(line.substr(tab1 + 1, tab2 - tab1 - 1)),
                        std::string(line.substr(tab2 + 1))};
    CheckDefinition(def, where);
    if (!keys.insert(def.key).second) {
      throw ValidationError(std::string("duplicate class key '") + def.key + "'", where);
    }
    if (!codes.insert(def.code).second) {
      throw ValidationError("duplicate class code '" + def.code + "'", where);
    }
    config.classes.push_back(std::move(def));
  }
  if (config.classes.empty()) throw ValidationError("no classes defined");
  return config;
}

std::string SaveClassConfig(const ClassConfig& config) {
  ValidateClassConfig(config);
  std::string out = "# key<TAB>code<TAB>name\n";
  out += std::string(kVersionDirective) + "\t" + config.version + "\n";
  for (const auto& c : config.classes) {
    out += c.key;
    out += "\t" + c.code + "\t" + c.name + "\n";
  }
  return out;
}

}  // namespace loopcurate::io
