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
#include "loopcurate/io/patch_labels.hpp"

#include <algorithm>

#include "loopcurate/core/error.hpp"
#include "loopcurate/io/json_codec.hpp"

namespace loopcurate::io {

namespace {

void CheckRecord(const PatchLabelRecord& r, const ClassConfig& config, int index) {
  const auto where = SourceLocation::Record(index);
  if (r.patch_file.empty()) throw ValidationError("empty patch_file", where);
  if (!config.HasCode(r.class_code)) {
    throw ValidationError("unknown class code '" + r.class_code + "'", where);
  }
}

}  // namespace

std::string WritePatchLabels(std::span<const PatchLabelRecord> records,
                             const ClassConfig& config) {
  Json out = Json::array();
  for (std::size_t i = 0; i < records.size(); ++i) {
    CheckRecord(records[i], config, static_cast<int>(i));
    out.push_back(ToJson(records[i]));
  }
  return CanonicalJson(out);
}

std::vector<PatchLabelRecord> ReadPatchLabels(std::string_view bytes, const ClassConfig& config) {
  const Json doc = ParseJson(bytes);
  if (!doc.is_array()) {
    throw ValidationError("patch label file must contain a JSON array");
  }
  std::vector<PatchLabelRecord> records;
  records.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const int index = static_cast<int>(i);
    PatchLabelRecord r;
    try {
      r = PatchLabelFromJson(doc[i]);
    } catch (const ValidationError& e) {
      throw ValidationError(e.message(), SourceLocation::Record(index));
    }
    CheckRecord(r, config, index);
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<PatchLabelRecord> QueryLabels(std::span<const PatchLabelRecord> records,
                                          std::string_view class_code) {
  std::vector<PatchLabelRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [&](const PatchLabelRecord& r) { return r.class_code == class_code; });
  return out;
}

}  // namespace loopcurate::io
