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
#include "loopcurate/loop/store.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>

#include "loopcurate/core/error.hpp"
#include "loopcurate/io/file_util.hpp"
#include "loopcurate/io/native_xml.hpp"
#include "loopcurate/loop/edit_journal.hpp"
#include "loopcurate/loop/fs.hpp"
#include "loopcurate/slide/slide.hpp"

namespace loopcurate::loop {

namespace fs = std::filesystem;

namespace {

constexpr const char* kProjectFile = "project.json";
constexpr const char* kLoopFile = "loop.json";
constexpr const char* kEvaluationFile = "evaluation.json";
constexpr const char* kMachineFile = "machine.xml";
constexpr const char* kJournalFile = "edits.log";
constexpr const char* kStateFile = "state.json";
constexpr const char* kCuratedFile = "curated.xml";
constexpr const char* kPatchDir = "patches";
constexpr const char* kLabelsFile = "labels.json";
constexpr const char* kLockFile = ".lock";
constexpr const char* kExportManifest = "training_manifest.json";

void CheckName(std::string_view what, std::string_view id) {
  const bool ok = !id.empty() && id != "." && id != ".." &&
                  std::all_of(id.begin(), id.end(), [](char c) {
                    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
                           c == '.';
                  });
  if (!ok) throw DomainError("invalid " + std::string(what) + " '" + std::string(id) + "'");
}

struct SlideState {
  SlideStage stage = SlideStage::kDetected;
  double active_threshold = 0.0;
};

SlideState ReadState(const fs::path& dir) {
  const io::Json j = io::ParseJson(io::ReadFile(dir / kStateFile));
  return {ParseSlideStage(io::RequireString(j, "stage")), io::RequireNumber(j, "active_threshold")};
}

void WriteState(const fs::path& dir, const SlideState& s) {
  io::WriteFileAtomic(dir / kStateFile,
                      io::CanonicalJson({{"stage", std::string(SlideStageName(s.stage))},
                                         {"active_threshold", s.active_threshold}}));
}

SlideStage Advance(SlideStage current, SlideStage next) { return std::max(current, next); }

long CountKept(const AnnotationSet& set) {
  return static_cast<long>(std::count_if(set.annotations.begin(), set.annotations.end(),
                                         [&](const auto& a) { return IsKept(a, set.active_threshold); }));
}

std::string Relative(int loop, std::string_view slide_id, const char* leaf) {
  return "loops/" + std::to_string(loop) + "/slides/" + std::string(slide_id) + "/" + leaf;
}

}  // namespace

std::string_view SlideStageName(SlideStage stage) {
  switch (stage) {
    case SlideStage::kDetected: return "DETECTED";
    case SlideStage::kFiltered: return "FILTERED";
    case SlideStage::kQaInProgress: return "QA_IN_PROGRESS";
    case SlideStage::kCurated: return "CURATED";
  }
  return "DETECTED";
}

SlideStage ParseSlideStage(std::string_view name) {
  for (SlideStage s : {SlideStage::kDetected, SlideStage::kFiltered, SlideStage::kQaInProgress,
                       SlideStage::kCurated}) {
    if (SlideStageName(s) == name) return s;
  }
  throw DomainError("unknown slide stage '" + std::string(name) + "'");
}

bool LoopRecord::FullyCurated() const {
  return std::all_of(stages.begin(), stages.end(),
                     [](const auto& kv) { return kv.second == SlideStage::kCurated; });
}

const SlideRegistration* Project::FindSlide(std::string_view slide_id) const {
  for (const auto& s : slides) {
    if (s.slide_id == slide_id) return &s;
  }
  return nullptr;
}

std::string Slugify(std::string_view name) {
  std::string out;
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      out += static_cast<char>(std::tolower(u));
    } else if (!out.empty() && out.back() != '-') {
      out += '-';
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

ProjectStore::ProjectStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (!fs::is_directory(root_)) throw IoError("cannot create storage root " + root_.string());
}

fs::path ProjectStore::DefaultRoot() {
  if (const char* env = std::getenv("LOOPCURATE_ROOT"); env && *env) return env;
  return fs::current_path() / "loopcurate-data";
}

fs::path ProjectStore::ProjectDir(std::string_view project_id) const {
  CheckName("project id", project_id);
  return root_ / std::string(project_id);
}

fs::path ProjectStore::SlideDir(std::string_view project_id, int loop,
                                std::string_view slide_id) const {
  CheckName("slide id", slide_id);
  return ProjectDir(project_id) / "loops" / std::to_string(loop) / "slides" / std::string(slide_id);
}

// ---- project and loop metadata -------------------------------------------

void ProjectStore::SaveProject(const Project& p) const {
  io::Json slides = io::Json::array();
  for (const auto& s : p.slides) slides.push_back({{"slide_id", s.slide_id}, {"path", s.path}});
  io::Json timing = io::Json::array();
  for (const auto& t : p.timing) timing.push_back(ToJson(t));
  io::WriteFileAtomic(ProjectDir(p.project_id) / kProjectFile,
                      io::CanonicalJson({{"project_id", p.project_id},
                                         {"name", p.name},
                                         {"class_config", io::ToJson(p.class_config)},
                                         {"slides", std::move(slides)},
                                         {"loop_count", p.loops.size()},
                                         {"timing", std::move(timing)}}));
}

void ProjectStore::SaveLoop(std::string_view project_id, const LoopRecord& r) const {
  io::Json slides = io::Json::array();
  for (const auto& [sid, stage] : r.stages) slides.push_back(sid);
  io::Json j = {{"loop_index", r.loop_index},
                {"detector", r.detector ? detect::ToJson(*r.detector) : io::Json(nullptr)},
                {"slides", std::move(slides)},
                {"training_export", r.training_export ? io::Json(*r.training_export) : io::Json(nullptr)}};
  io::WriteFileAtomic(ProjectDir(project_id) / "loops" / std::to_string(r.loop_index) / kLoopFile,
                      io::CanonicalJson(j));
}

Project ProjectStore::CreateProject(const std::string& name, const io::ClassConfig& config) {
  io::ValidateClassConfig(config);
  const std::string id = Slugify(name);
  if (id.empty()) throw DomainError("project name must contain a letter or digit");
  FileLock lock(root_ / kLockFile);
  for (const auto& existing : ListProjects()) {
    if (existing == id || GetProject(existing).name == name) {
      throw ConflictError("project '" + name + "' already exists");
    }
  }
  Project p;
  p.project_id = id;
  p.name = name;
  p.class_config = config;
  SaveProject(p);
  return p;
}

Project ProjectStore::GetProject(std::string_view project_id) const {
  const fs::path dir = ProjectDir(project_id);
  if (!fs::exists(dir / kProjectFile)) {
    throw NotFoundError("no project '" + std::string(project_id) + "'");
  }
  const io::Json j = io::ParseJson(io::ReadFile(dir / kProjectFile));
  Project p;
  p.project_id = io::RequireString(j, "project_id");
  p.name = io::RequireString(j, "name");
  p.class_config = io::ClassConfigFromJson(io::RequireField(j, "class_config"));
  for (const auto& s : io::RequireField(j, "slides")) {
    p.slides.push_back({io::RequireString(s, "slide_id"), io::RequireString(s, "path")});
  }
  for (const auto& t : io::RequireField(j, "timing")) p.timing.push_back(TimingSampleFromJson(t));
  const long long loops = io::RequireInteger(j, "loop_count");
  for (int n = 1; n <= loops; ++n) p.loops.push_back(GetLoop(project_id, n));
  return p;
}

std::vector<std::string> ProjectStore::ListProjects() const {
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(root_)) {
    if (entry.is_directory() && fs::exists(entry.path() / kProjectFile)) {
      out.push_back(entry.path().filename().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

SlideRegistration ProjectStore::RegisterSlide(std::string_view project_id,
                                              const fs::path& slide_path) {
  const slide::SlideHandle handle = slide::OpenSlide(slide_path);
  CheckName("slide id", handle.slide_id());
  FileLock lock(ProjectDir(project_id) / kLockFile);
  Project p = GetProject(project_id);
  if (p.FindSlide(handle.slide_id())) {
    throw ConflictError("slide '" + handle.slide_id() + "' is already registered");
  }
  SlideRegistration reg{handle.slide_id(), fs::absolute(slide_path).lexically_normal().string()};
  p.slides.push_back(reg);
  SaveProject(p);
  return reg;
}

LoopRecord ProjectStore::StartLoop(std::string_view project_id,
                                   const std::optional<detect::DetectorSpec>& detector,
                                   const std::optional<std::vector<std::string>>& slide_ids) {
  FileLock lock(ProjectDir(project_id) / kLockFile);
  Project p = GetProject(project_id);
  const int index = static_cast<int>(p.loops.size()) + 1;
  if (!p.loops.empty() && !p.loops.back().FullyCurated()) {
    throw PreconditionError("loop " + std::to_string(index - 1) + " is not fully curated");
  }
  if (!detector && index > 1) {
    throw PreconditionError("a detector is required from loop 2 on");
  }
  if (detector) detect::ValidateDetectorSpec(*detector);

  std::vector<std::string> ids;
  if (slide_ids) {
    for (const auto& sid : *slide_ids) {
      if (!p.FindSlide(sid)) throw NotFoundError("slide '" + sid + "' is not registered");
      ids.push_back(sid);
    }
  } else {
    for (const auto& s : p.slides) ids.push_back(s.slide_id);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  const fs::path loop_dir = ProjectDir(project_id) / "loops" / std::to_string(index);
  std::error_code ec;
  fs::remove_all(loop_dir, ec);

  LoopRecord record;
  record.loop_index = index;
  record.detector = detector;
  for (const auto& sid : ids) {
    const fs::path dir = SlideDir(project_id, index, sid);
    AnnotationSet machine;
    machine.slide_id = sid;
    SlideState state{SlideStage::kQaInProgress, 0.0};
    if (detector) {
      machine = detect::Detect(slide::OpenSlide(p.FindSlide(sid)->path), *detector, index);
      state.stage = SlideStage::kDetected;
    }
    io::WriteFileAtomic(dir / kMachineFile, io::WriteNativeXml(machine));
    WriteState(dir, state);
    record.stages[sid] = state.stage;
  }
  SaveLoop(project_id, record);
  p.loops.push_back(record);
  SaveProject(p);
  return record;
}

LoopRecord ProjectStore::GetLoop(std::string_view project_id, int loop) const {
  const fs::path file = ProjectDir(project_id) / "loops" / std::to_string(loop) / kLoopFile;
  if (loop < 1 || !fs::exists(file)) {
    throw NotFoundError("no loop " + std::to_string(loop) + " in project '" +
                        std::string(project_id) + "'");
  }
  const io::Json j = io::ParseJson(io::ReadFile(file));
  LoopRecord r;
  r.loop_index = static_cast<int>(io::RequireInteger(j, "loop_index"));
  if (const auto& d = io::RequireField(j, "detector"); !d.is_null()) {
    r.detector = detect::DetectorSpecFromJson(d);
  }
  for (const auto& sid : io::RequireField(j, "slides")) {
    const std::string id = sid.get<std::string>();
    r.stages[id] = ReadState(SlideDir(project_id, loop, id)).stage;
  }
  if (const auto& t = io::RequireField(j, "training_export"); !t.is_null()) {
    r.training_export = t.get<std::string>();
  }
  const fs::path eval = file.parent_path() / kEvaluationFile;
  if (fs::exists(eval)) {
    r.evaluation = detect::EvaluationReportFromJson(io::ParseJson(io::ReadFile(eval)));
  }
  return r;
}

int ProjectStore::LatestLoop(std::string_view project_id) const {
  const io::Json j = io::ParseJson(io::ReadFile(ProjectDir(project_id) / kProjectFile));
  const auto n = io::RequireInteger(j, "loop_count");
  if (n < 1) throw PreconditionError("no loop has been started");
  return static_cast<int>(n);
}

void ProjectStore::CheckSlideInLoop(std::string_view project_id, int loop,
                                    std::string_view slide_id) const {
  if (!GetLoop(project_id, loop).stages.contains(std::string(slide_id))) {
    throw NotFoundError("slide '" + std::string(slide_id) + "' is not part of loop " +
                        std::to_string(loop));
  }
}

// ---- annotation state ------------------------------------------------------

AnnotationSet ProjectStore::MachineSet(std::string_view project_id, int loop,
                                       std::string_view slide_id) const {
  CheckSlideInLoop(project_id, loop, slide_id);
  return io::ParseNativeXml(io::ReadFile(SlideDir(project_id, loop, slide_id) / kMachineFile)).set;
}

std::vector<AnnotationEdit> ProjectStore::Edits(std::string_view project_id, int loop,
                                                std::string_view slide_id) const {
  CheckSlideInLoop(project_id, loop, slide_id);
  std::vector<AnnotationEdit> out;
  for (auto& b : ReadJournal(SlideDir(project_id, loop, slide_id) / kJournalFile).batches) {
    out.insert(out.end(), b.edits.begin(), b.edits.end());
  }
  return out;
}

AnnotationSet ProjectStore::CurrentSet(std::string_view project_id, int loop,
                                       std::string_view slide_id) const {
  AnnotationSet set = Replay(MachineSet(project_id, loop, slide_id), Edits(project_id, loop, slide_id));
  set.active_threshold = ReadState(SlideDir(project_id, loop, slide_id)).active_threshold;
  return set;
}

AnnotationSet ProjectStore::CuratedSet(std::string_view project_id, int loop,
                                       std::string_view slide_id) const {
  const AnnotationSet current = CurrentSet(project_id, loop, slide_id);
  return FilterByThreshold(current, current.active_threshold);
}

SlideView ProjectStore::Annotations(std::string_view project_id, int loop,
                                    std::string_view slide_id,
                                    std::optional<double> threshold) const {
  CheckSlideInLoop(project_id, loop, slide_id);
  const fs::path dir = SlideDir(project_id, loop, slide_id);
  const SlideState state = ReadState(dir);
  const JournalContents journal = ReadJournal(dir / kJournalFile);
  std::vector<AnnotationEdit> edits;
  for (const auto& b : journal.batches) edits.insert(edits.end(), b.edits.begin(), b.edits.end());
  const AnnotationSet current =
      Replay(io::ParseNativeXml(io::ReadFile(dir / kMachineFile)).set, edits);

  SlideView view;
  view.slide_id = std::string(slide_id);
  view.loop_index = loop;
  view.stage = state.stage;
  view.revision = static_cast<long>(journal.batches.size());
  view.active_threshold = state.active_threshold;
  view.view_threshold = threshold.value_or(state.active_threshold);
  view.total = current.annotations.size();
  view.annotations = FilterByThreshold(current, view.view_threshold);
  return view;
}

SlideView ProjectStore::ApplyThreshold(std::string_view project_id, int loop,
                                       std::string_view slide_id, double threshold) {
  CheckSlideInLoop(project_id, loop, slide_id);
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw DomainError("threshold must be in [0,1]");
  const fs::path dir = SlideDir(project_id, loop, slide_id);
  FileLock lock(dir / kLockFile);
  SlideState state = ReadState(dir);
  if (state.stage == SlideStage::kCurated) {
    throw PreconditionError("slide '" + std::string(slide_id) + "' is already curated");
  }
  state.active_threshold = threshold;
  state.stage = Advance(state.stage, SlideStage::kFiltered);
  WriteState(dir, state);
  return Annotations(project_id, loop, slide_id);
}

SlideView ProjectStore::SubmitEdits(std::string_view project_id, int loop,
                                    std::string_view slide_id, std::vector<AnnotationEdit> edits,
                                    std::optional<long> expected_revision) {
  CheckSlideInLoop(project_id, loop, slide_id);
  if (loop != LatestLoop(project_id)) {
    throw ConflictError("loop " + std::to_string(loop) + " is stale");
  }
  const fs::path dir = SlideDir(project_id, loop, slide_id);
  FileLock lock(dir / kLockFile);
  SlideState state = ReadState(dir);
  if (state.stage != SlideStage::kFiltered && state.stage != SlideStage::kQaInProgress) {
    throw PreconditionError("slide '" + std::string(slide_id) + "' is " +
                            std::string(SlideStageName(state.stage)) +
                            "; edits need FILTERED or QA_IN_PROGRESS");
  }
  const JournalContents journal = ReadJournal(dir / kJournalFile);
  const long revision = static_cast<long>(journal.batches.size());
  if (expected_revision && *expected_revision != revision) {
    throw ConflictError("expected revision " + std::to_string(*expected_revision) +
                        " but slide is at " + std::to_string(revision));
  }
  if (edits.empty()) return Annotations(project_id, loop, slide_id);

  const io::ClassConfig config = GetProject(project_id).class_config;
  for (auto& e : edits) {
    e.loop_index = loop;
    if (e.class_label && !config.HasCode(*e.class_label)) {
      throw ValidationError("unknown class code '" + *e.class_label + "'");
    }
  }
  std::vector<AnnotationEdit> all;
  for (const auto& b : journal.batches) all.insert(all.end(), b.edits.begin(), b.edits.end());
  const AnnotationSet before =
      Replay(io::ParseNativeXml(io::ReadFile(dir / kMachineFile)).set, all);
  Replay(before, edits);  // throws on an invalid batch before anything is written

  AppendJournal(dir / kJournalFile, {revision + 1, std::move(edits)});
  if (state.stage != SlideStage::kQaInProgress) {
    state.stage = SlideStage::kQaInProgress;
    WriteState(dir, state);
  }
  return Annotations(project_id, loop, slide_id);
}

SlideView ProjectStore::Finalize(std::string_view project_id, int loop,
                                 std::string_view slide_id) {
  CheckSlideInLoop(project_id, loop, slide_id);
  const fs::path dir = SlideDir(project_id, loop, slide_id);
  FileLock lock(dir / kLockFile);
  SlideState state = ReadState(dir);
  if (state.stage == SlideStage::kDetected) {
    throw PreconditionError("slide '" + std::string(slide_id) + "' has not been filtered");
  }
  if (state.stage != SlideStage::kCurated) {
    io::WriteFileAtomic(dir / kCuratedFile, io::WriteNativeXml(CuratedSet(project_id, loop, slide_id)));
    state.stage = SlideStage::kCurated;
    WriteState(dir, state);
  }
  return Annotations(project_id, loop, slide_id);
}

// ---- patches and labels ----------------------------------------------------

slide::PatchManifest ProjectStore::ExtractPatches(std::string_view project_id, int loop,
                                                  std::string_view slide_id,
                                                  double padding_ratio) {
  CheckSlideInLoop(project_id, loop, slide_id);
  const Project p = GetProject(project_id);
  const fs::path dir = SlideDir(project_id, loop, slide_id);
  FileLock lock(dir / kLockFile);
  const AnnotationSet curated = CuratedSet(project_id, loop, slide_id);
  std::error_code ec;
  fs::remove_all(dir / kPatchDir, ec);
  return slide::ExtractPatches(slide::OpenSlide(p.FindSlide(slide_id)->path), curated,
                               padding_ratio, dir / kPatchDir);
}

std::optional<slide::PatchManifest> ProjectStore::PatchManifestFor(std::string_view project_id,
                                                                   int loop,
                                                                   std::string_view slide_id) const {
  CheckSlideInLoop(project_id, loop, slide_id);
  const fs::path file = SlideDir(project_id, loop, slide_id) / kPatchDir / slide::kManifestName;
  if (!fs::exists(file)) return std::nullopt;
  return slide::ReadPatchManifest(io::ReadFile(file));
}

std::vector<io::PatchLabelRecord> ProjectStore::Labels(std::string_view project_id, int loop,
                                                       std::string_view slide_id) const {
  CheckSlideInLoop(project_id, loop, slide_id);
  const fs::path file = SlideDir(project_id, loop, slide_id) / kLabelsFile;
  if (!fs::exists(file)) return {};
  return io::ReadPatchLabels(io::ReadFile(file), GetProject(project_id).class_config);
}

std::vector<io::PatchLabelRecord> ProjectStore::SubmitLabels(
    std::string_view project_id, int loop, std::string_view slide_id,
    std::vector<io::PatchLabelRecord> records) {
  const Project p = GetProject(project_id);
  const auto manifest = PatchManifestFor(project_id, loop, slide_id);
  if (!manifest) {
    throw PreconditionError("no patches extracted for slide '" + std::string(slide_id) + "'");
  }
  std::map<std::string, AnnotationId> files;
  for (const auto& e : manifest->entries) files[e.patch_file] = e.annotation_id;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const auto loc = SourceLocation::Record(static_cast<int>(i));
    if (r.slide_id != slide_id) throw ValidationError("record names another slide", loc);
    auto it = files.find(r.patch_file);
    if (it == files.end()) throw ValidationError("unknown patch '" + r.patch_file + "'", loc);
    if (it->second != r.annotation_id) {
      throw ValidationError("annotation id does not match patch '" + r.patch_file + "'", loc);
    }
    if (!p.class_config.HasCode(r.class_code)) {
      throw ValidationError("unknown class code '" + r.class_code + "'", loc);
    }
  }

  const fs::path dir = SlideDir(project_id, loop, slide_id);
  FileLock lock(dir / kLockFile);
  std::map<std::string, io::PatchLabelRecord> merged;
  for (auto& r : Labels(project_id, loop, slide_id)) merged[r.patch_file] = std::move(r);
  for (auto& r : records) {
    auto it = merged.find(r.patch_file);
    if (it == merged.end() || r.labeled_at >= it->second.labeled_at) {
      merged[r.patch_file] = std::move(r);
    }
  }
  std::vector<io::PatchLabelRecord> out;
  for (auto& [file, r] : merged) out.push_back(std::move(r));
  io::WriteFileAtomic(dir / kLabelsFile, io::WritePatchLabels(out, p.class_config));
  return out;
}

// ---- timing, export, evaluation -------------------------------------------

TimingStats ProjectStore::RecordTiming(std::string_view project_id, const TimingSample& sample) {
  ValidateTimingSample(sample);
  FileLock lock(ProjectDir(project_id) / kLockFile);
  Project p = GetProject(project_id);
  p.timing.push_back(sample);
  SaveProject(p);
  return ComputeTimingStats(p.timing);
}

TrainingExport ProjectStore::ExportTrainingSet(std::string_view project_id, int loop) {
  LoopRecord record = GetLoop(project_id, loop);
  for (const auto& [sid, stage] : record.stages) {
    if (stage != SlideStage::kCurated) {
      throw PreconditionError("slide '" + sid + "' is not curated (" +
                              std::string(SlideStageName(stage)) + ")");
    }
  }
  const Project p = GetProject(project_id);
  TrainingExport out;
  out.loop_index = loop;
  for (const auto& [sid, stage] : record.stages) {
    auto manifest = PatchManifestFor(project_id, loop, sid);
    if (!manifest) manifest = ExtractPatches(project_id, loop, sid);
    std::set<std::string> files;
    for (const auto& e : manifest->entries) files.insert(e.patch_file);

    TrainingExportEntry entry;
    entry.slide_id = sid;
    entry.slide_path = p.FindSlide(sid)->path;
    entry.curated_xml = Relative(loop, sid, kCuratedFile);
    entry.patch_manifest = Relative(loop, sid, "patches/manifest.json");
    entry.objects = static_cast<long>(manifest->entries.size());
    for (const auto& label : Labels(project_id, loop, sid)) {
      if (!files.contains(label.patch_file)) continue;
      ++entry.labeled;
      ++out.class_counts[label.class_code];
    }
    out.total_objects += entry.objects;
    out.total_labeled += entry.labeled;
    out.entries.push_back(std::move(entry));
  }

  FileLock lock(ProjectDir(project_id) / kLockFile);
  out.manifest_path = "loops/" + std::to_string(loop) + "/export/" + kExportManifest;
  io::WriteFileAtomic(ProjectDir(project_id) / out.manifest_path, io::CanonicalJson(ToJson(out)));
  record = GetLoop(project_id, loop);
  record.training_export = out.manifest_path;
  SaveLoop(project_id, record);
  return out;
}

detect::EvaluationReport ProjectStore::EvaluateLoop(std::string_view project_id, int loop,
                                                    const std::vector<HoldoutItem>& holdout,
                                                    GeometryMode mode) {
  const Project p = GetProject(project_id);
  const LoopRecord record = GetLoop(project_id, loop);
  std::vector<detect::EvaluationImage> images;
  for (const auto& item : holdout) {
    if (p.FindSlide(item.ground_truth.slide_id)) {
      throw DomainError("holdout slide '" + item.ground_truth.slide_id +
                        "' is registered in the project");
    }
    detect::EvaluationImage image;
    image.ground_truth = item.ground_truth.annotations;
    if (item.detections) {
      image.detections = item.detections->annotations;
    } else if (item.slide_path) {
      if (!record.detector) throw PreconditionError("loop has no detector to run on the holdout");
      const slide::SlideHandle handle = slide::OpenSlide(*item.slide_path);
      if (p.FindSlide(handle.slide_id())) {
        throw DomainError("holdout slide '" + handle.slide_id() + "' is registered in the project");
      }
      image.detections = detect::Detect(handle, *record.detector, loop).annotations;
    } else {
      throw ValidationError("holdout item needs detections or a slide path");
    }
    images.push_back(std::move(image));
  }
  const detect::EvaluationReport report = detect::AveragePrecision(images, mode);
  FileLock lock(ProjectDir(project_id) / kLockFile);
  io::WriteFileAtomic(ProjectDir(project_id) / "loops" / std::to_string(loop) / kEvaluationFile,
                      io::CanonicalJson(detect::ToJson(report)));
  return report;
}

io::Json ProjectStore::Stats(std::string_view project_id) const {
  const Project p = GetProject(project_id);
  io::Json loops = io::Json::array();
  io::Json comparisons = io::Json::array();
  const LoopRecord* previous_evaluated = nullptr;
  for (const auto& record : p.loops) {
    io::Json stage_counts = io::Json::object();
    for (SlideStage s : {SlideStage::kDetected, SlideStage::kFiltered, SlideStage::kQaInProgress,
                         SlideStage::kCurated}) {
      stage_counts[std::string(SlideStageName(s))] = 0;
    }
    io::Json slides = io::Json::array();
    CurationDiff diff_total;
    std::map<std::string, long> label_counts;
    long labeled = 0;
    for (const auto& [sid, stage] : record.stages) {
      stage_counts[std::string(SlideStageName(stage))] =
          stage_counts[std::string(SlideStageName(stage))].get<int>() + 1;
      const SlideView view = Annotations(project_id, record.loop_index, sid);
      const AnnotationSet machine = MachineSet(project_id, record.loop_index, sid);
      const AnnotationSet curated = CuratedSet(project_id, record.loop_index, sid);
      const CurationDiff diff = DiffSets(machine, curated);
      diff_total.added += diff.added;
      diff_total.deleted += diff.deleted;
      diff_total.moved += diff.moved;
      diff_total.unchanged += diff.unchanged;
      diff_total.reclassified += diff.reclassified;
      const auto labels = Labels(project_id, record.loop_index, sid);
      for (const auto& l : labels) ++label_counts[l.class_code];
      labeled += static_cast<long>(labels.size());
      slides.push_back({{"slide_id", sid},
                        {"stage", std::string(SlideStageName(stage))},
                        {"revision", view.revision},
                        {"active_threshold", view.active_threshold},
                        {"total", view.total},
                        {"kept", CountKept(curated)},
                        {"labeled", labels.size()},
                        {"diff", io::ToJson(diff)}});
    }
    loops.push_back({{"loop_index", record.loop_index},
                     {"stages", std::move(stage_counts)},
                     {"slides", std::move(slides)},
                     {"diff", io::ToJson(diff_total)},
                     {"labels", label_counts},
                     {"labeled", labeled},
                     {"evaluation", record.evaluation ? detect::ToJson(*record.evaluation)
                                                      : io::Json(nullptr)}});
    if (record.evaluation) {
      if (previous_evaluated &&
          previous_evaluated->evaluation->geometry_mode == record.evaluation->geometry_mode) {
        io::Json c = detect::ToJson(
            detect::CompareLoops(*previous_evaluated->evaluation, *record.evaluation));
        c["from_loop"] = previous_evaluated->loop_index;
        c["to_loop"] = record.loop_index;
        comparisons.push_back(std::move(c));
      }
      previous_evaluated = &record;
    }
  }
  return {{"project_id", p.project_id},
          {"timing", ToJson(ComputeTimingStats(p.timing))},
          {"loops", std::move(loops)},
          {"comparisons", std::move(comparisons)}};
}

// ---- JSON ------------------------------------------------------------------

io::Json ToJson(const LoopRecord& r) {
  io::Json stages = io::Json::object();
  for (const auto& [sid, stage] : r.stages) stages[sid] = std::string(SlideStageName(stage));
  return {{"loop_index", r.loop_index},
          {"detector", r.detector ? detect::ToJson(*r.detector) : io::Json(nullptr)},
          {"stages", std::move(stages)},
          {"evaluation", r.evaluation ? detect::ToJson(*r.evaluation) : io::Json(nullptr)},
          {"training_export", r.training_export ? io::Json(*r.training_export) : io::Json(nullptr)}};
}

io::Json ToJson(const Project& p) {
  io::Json slides = io::Json::array();
  for (const auto& s : p.slides) slides.push_back({{"slide_id", s.slide_id}, {"path", s.path}});
  io::Json loops = io::Json::array();
  for (const auto& l : p.loops) loops.push_back(ToJson(l));
  io::Json timing = io::Json::array();
  for (const auto& t : p.timing) timing.push_back(ToJson(t));
  return {{"project_id", p.project_id},
          {"name", p.name},
          {"class_config", io::ToJson(p.class_config)},
          {"slides", std::move(slides)},
          {"loops", std::move(loops)},
          {"timing", std::move(timing)}};
}

io::Json ToJson(const SlideView& v) {
  io::Json annotations = io::Json::array();
  for (const auto& a : v.annotations.annotations) annotations.push_back(io::ToJson(a));
  return {{"slide_id", v.slide_id},
          {"loop_index", v.loop_index},
          {"stage", std::string(SlideStageName(v.stage))},
          {"revision", v.revision},
          {"active_threshold", v.active_threshold},
          {"threshold", v.view_threshold},
          {"total", v.total},
          {"kept", v.annotations.annotations.size()},
          {"annotations", std::move(annotations)}};
}

io::Json ToJson(const TrainingExport& e) {
  io::Json entries = io::Json::array();
  for (const auto& x : e.entries) {
    entries.push_back({{"slide_id", x.slide_id},
                       {"slide_path", x.slide_path},
                       {"curated_xml", x.curated_xml},
                       {"patch_manifest", x.patch_manifest},
                       {"objects", x.objects},
                       {"labeled", x.labeled}});
  }
  return {{"loop_index", e.loop_index},
          {"entries", std::move(entries)},
          {"class_counts", e.class_counts},
          {"total_objects", e.total_objects},
          {"total_labeled", e.total_labeled}};
}

TrainingExport TrainingExportFromJson(const io::Json& j) {
  TrainingExport e;
  e.loop_index = static_cast<int>(io::RequireInteger(j, "loop_index"));
  for (const auto& x : io::RequireField(j, "entries")) {
    TrainingExportEntry entry;
    entry.slide_id = io::RequireString(x, "slide_id");
    entry.slide_path = io::RequireString(x, "slide_path");
    entry.curated_xml = io::RequireString(x, "curated_xml");
    entry.patch_manifest = io::RequireString(x, "patch_manifest");
    entry.objects = static_cast<long>(io::RequireInteger(x, "objects"));
    entry.labeled = static_cast<long>(io::RequireInteger(x, "labeled"));
    e.entries.push_back(std::move(entry));
  }
  e.class_counts = io::RequireField(j, "class_counts").get<std::map<std::string, long>>();
  e.total_objects = static_cast<long>(io::RequireInteger(j, "total_objects"));
  e.total_labeled = static_cast<long>(io::RequireInteger(j, "total_labeled"));
  return e;
}

}  // namespace loopcurate::loop
