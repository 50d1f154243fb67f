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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "loopcurate/core/edit.hpp"

namespace loopcurate::loop {

// One submit_edits call. Revision n is the n-th committed batch (1-based).
struct JournalBatch {
  long revision = 0;
  std::vector<AnnotationEdit> edits;
  bool operator==(const JournalBatch&) const = default;
};

struct JournalContents {
  std::vector<JournalBatch> batches;
  std::size_t valid_bytes = 0;  // length of the committed prefix
  bool torn_tail = false;       // bytes after the committed prefix
};

// Append-only log, one line per batch: "<crc32 hex>\t<canonical json>\n".
// A line counts only when complete, its checksum matches and its revision
// follows the previous one; reading stops at the first line that does not.
JournalContents ReadJournal(const std::filesystem::path& path);

// Drops any torn tail, then appends `batch` with a single write and fsync.
// The caller holds the slide lock.
void AppendJournal(const std::filesystem::path& path, const JournalBatch& batch);

std::string EncodeJournalLine(const JournalBatch& batch);

// Test hook: when set, the next appends write only this many bytes of the
// line and then raise SIGKILL.
void SetJournalCrashPoint(std::optional<std::size_t> bytes);

}  // namespace loopcurate::loop
