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
#include <stdexcept>
#include <string>
#include <string_view>

namespace loopcurate {

enum class ErrorCode {
  kDomain,
  kNotFound,
  kParse,
  kValidation,
  kFormat,
  kIo,
  kConflict,
  kDetector,
  kPrecondition,
};

std::string_view ErrorCodeName(ErrorCode code);

// Where in an input an error was found: a line/column pair for text
// formats, or a record index for record-oriented formats.
struct SourceLocation {
  std::optional<int> line;
  std::optional<int> column;
  std::optional<int> record;

  static SourceLocation At(int line, int column) { return {line, column, std::nullopt}; }
  static SourceLocation Line(int line) { return {line, std::nullopt, std::nullopt}; }
  static SourceLocation Record(int index) { return {std::nullopt, std::nullopt, index}; }

  std::string ToString() const;
};

// Base of every error the library throws. The code selects the error family,
// callers that only need a category can catch this type and switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<SourceLocation> location = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  const std::optional<SourceLocation>& location() const noexcept { return location_; }
  // Message without the location suffix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
  std::optional<SourceLocation> location_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& m) : Error(ErrorCode::kDomain, m) {}
};
struct NotFoundError : Error {
  explicit NotFoundError(const std::string& m) : Error(ErrorCode::kNotFound, m) {}
};
struct ParseError : Error {
  ParseError(const std::string& m, SourceLocation loc) : Error(ErrorCode::kParse, m, loc) {}
};
struct ValidationError : Error {
  explicit ValidationError(const std::string& m,
                           std::optional<SourceLocation> loc = std::nullopt)
      : Error(ErrorCode::kValidation, m, loc) {}
};
struct FormatError : Error {
  explicit FormatError(const std::string& m) : Error(ErrorCode::kFormat, m) {}
};
struct IoError : Error {
  explicit IoError(const std::string& m) : Error(ErrorCode::kIo, m) {}
};
struct ConflictError : Error {
  explicit ConflictError(const std::string& m) : Error(ErrorCode::kConflict, m) {}
};
struct DetectorError : Error {
  explicit DetectorError(const std::string& m) : Error(ErrorCode::kDetector, m) {}
};
struct PreconditionError : Error {
  explicit PreconditionError(const std::string& m) : Error(ErrorCode::kPrecondition, m) {}
};

}  // namespace loopcurate
