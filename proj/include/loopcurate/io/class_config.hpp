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

namespace loopcurate::io {

struct ClassDefinition {
  char key = '1';  // hotkey used while classifying patches
  std::string code;
  std::string name;

  bool operator==(const ClassDefinition&) const = default;
};

struct ClassConfig {
  std::vector<ClassDefinition> classes;
  std::string version = "1";

  const ClassDefinition* FindByCode(std::string_view code) const;
  const ClassDefinition* FindByKey(char key) const;
  bool HasCode(std::string_view code) const { return FindByCode(code) != nullptr; }

  bool operator==(const ClassConfig&) const = default;
};

// Throws ValidationError on an empty class list, duplicate keys or codes,
// or fields that cannot be written to the line format.
void ValidateClassConfig(const ClassConfig& config);

// Line-oriented UTF-8 text, LF endings, hand editable:
//
//   # key<TAB>code<TAB>name
//   @version<TAB>1
//   1<TAB>GDG<TAB>Global Disappearing Glomerulosclerosis
//   2<TAB>GOG<TAB>Global Obsolescent Glomerulosclerosis
//
// Lines starting with '#' and blank lines are ignored. The @version line is
// optional (defaults to "1"). Errors carry the offending line number.
ClassConfig LoadClassConfig(std::string_view text);
std::string SaveClassConfig(const ClassConfig& config);

}  // namespace loopcurate::io
