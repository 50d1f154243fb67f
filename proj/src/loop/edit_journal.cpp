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
#include "loopcurate/loop/edit_journal.hpp"

#include <fcntl.h>
#include <unistd.h>
#include <zlib.h>

#include <atomic>
#include <cerrno>
#include <csignal>
#include <cstdio>
#include <cstring>

#include "loopcurate/core/error.hpp"
#include "loopcurate/io/file_util.hpp"
#include "loopcurate/io/json_codec.hpp"

namespace loopcurate::loop {

namespace {

std::atomic<long long> g_crash_point{-1};

std::uint32_t Crc(std::string_view s) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(s.data()), static_cast<uInt>(s.size())));
}

std::string Hex(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

void WriteAll(int fd, std::string_view bytes, const std::filesystem::path& path) {
  while (!bytes.empty()) {
    const ssize_t n = ::write(fd, bytes.data(), bytes.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw IoError("write failed on " + path.string() + ": " + std::strerror(errno));
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
}

std::optional<JournalBatch> DecodeLine(std::string_view line) {
  const auto tab = line.find('\t');
  if (tab != 8) return std::nullopt;
  const std::string_view payload = line.substr(tab + 1);
  if (Hex(Crc(payload)) != line.substr(0, 8)) return std::nullopt;
  try {
    const io::Json doc = io::ParseJson(payload);
    JournalBatch batch;
    batch.revision = static_cast<long>(io::RequireInteger(doc, "revision"));
    for (const auto& e : io::RequireField(doc, "edits")) batch.edits.push_back(io::EditFromJson(e));
    return batch;
  } catch (const Error&) {
    return std::nullopt;
  } catch (const io::Json::exception&) {
    return std::nullopt;
  }
}

}  // namespace

std::string EncodeJournalLine(const JournalBatch& batch) {
  io::Json edits = io::Json::array();
  for (const auto& e : batch.edits) edits.push_back(io::ToJson(e));
  const std::string payload = io::Json{{"revision", batch.revision}, {"edits", edits}}.dump();
  return Hex(Crc(payload)) + "\t" + payload + "\n";
}

JournalContents ReadJournal(const std::filesystem::path& path) {
  JournalContents out;
  std::string bytes;
  try {
    bytes = io::ReadFile(path);
  } catch (const NotFoundError&) {
    return out;
  }
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const auto nl = bytes.find('\n', pos);
    if (nl == std::string::npos) break;
    auto batch = DecodeLine(std::string_view(bytes).substr(pos, nl - pos));
    if (!batch || batch->revision != static_cast<long>(out.batches.size()) + 1) break;
    out.batches.push_back(std::move(*batch));
    pos = nl + 1;
  }
  out.valid_bytes = pos;
  out.torn_tail = pos < bytes.size();
  return out;
}

void AppendJournal(const std::filesystem::path& path, const JournalBatch& batch) {
  const JournalContents current = ReadJournal(path);
  if (batch.revision != static_cast<long>(current.batches.size()) + 1) {
    throw ConflictError("journal revision mismatch");
  }
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
  try {
    if (current.torn_tail && ::ftruncate(fd, static_cast<off_t>(current.valid_bytes)) != 0) {
      throw IoError("cannot truncate " + path.string() + ": " + std::strerror(errno));
    }
    if (::lseek(fd, static_cast<off_t>(current.valid_bytes), SEEK_SET) < 0) {
      throw IoError("cannot seek " + path.string() + ": " + std::strerror(errno));
    }
    const std::string line = EncodeJournalLine(batch);
    const long long crash = g_crash_point.load();
    if (crash >= 0) {
      WriteAll(fd, std::string_view(line).substr(0, std::min<std::size_t>(crash, line.size())),
               path);
      ::fsync(fd);
      std::raise(SIGKILL);
    }
    WriteAll(fd, line, path);
    if (::fsync(fd) != 0) throw IoError("fsync failed on " + path.string());
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
}

void SetJournalCrashPoint(std::optional<std::size_t> bytes) {
  g_crash_point.store(bytes ? static_cast<long long>(*bytes) : -1);
}

}  // namespace loopcurate::loop
