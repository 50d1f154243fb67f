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
#include "loopcurate/core/error.hpp"

namespace loopcurate {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomain: return "domain_error";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kValidation: return "validation_error";
    case ErrorCode::kFormat: return "format_error";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kDetector: return "detector_error";
    case ErrorCode::kPrecondition: return "precondition_failed";
  }
  return "error";
}

std::string SourceLocation::ToString() const {
  std::string out;
  if (line) {
    out = "line " + std::to_string(*line);
    if (column) out += ", column " + std::to_string(*column);
  }
  if (record) {
    if (!out.empty()) out += ", ";
    out += "record " + std::to_string(*record);
  }
  return out;
}

namespace {

std::string WithLocation(const std::string& message,
                         const std::optional<SourceLocation>& location) {
  if (!location) return message;
  const std::string where = location->ToString();
  return where.empty() ? message : message + " (" + where + ")";
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<SourceLocation> location)
    : std::runtime_error(WithLocation(message, location)),
      code_(code),
      message_(message),
      location_(std::move(location)) {}

}  // namespace loopcurate
