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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loopcurate/core/annotation.hpp"
#include "loopcurate/core/edit.hpp"
#include "loopcurate/detect/detector.hpp"
#include "loopcurate/detect/evaluation.hpp"
#include "loopcurate/io/class_config.hpp"
#include "loopcurate/io/json_codec.hpp"
#include "loopcurate/io/patch_labels.hpp"
#include "loopcurate/loop/timing.hpp"
#include "loopcurate/slide/patches.hpp"

namespace loopcurate::loop {

enum class SlideStage { kDetected, kFiltered, kQaInProgress, kCurated };

std::string_view SlideStageName(SlideStage stage);
SlideStage ParseSlideStage(std::string_view name);

struct SlideRegistration {
  std::string slide_id;
  std::string path;  // slide container directory
  bool operator==(const SlideRegistration&) const = default;
};

struct LoopRecord {
  int loop_index = 1;
  std::optional<detect::DetectorSpec> detector;
  std::map<std::string, SlideStage> stages;  // by slide_id
  std::optional<detect::EvaluationReport> evaluation;
  std::optional<std::string> training_export;  // relative to the project directory

  bool FullyCurated() const;
};

struct Project {
  std::string project_id;
  std::string name;
  io::ClassConfig class_config;
  std::vector<SlideRegistration> slides;
  std::vector<LoopRecord> loops;
  std::vector<TimingSample> timing;

  const SlideRegistration* FindSlide(std::string_view slide_id) const;
};

// A slide's annotation state within one loop.
struct SlideView {
  std::string slide_id;
  int loop_index = 1;
  SlideStage stage = SlideStage::kDetected;
  long revision = 0;            // committed edit batches
  double active_threshold = 0;  // persisted filter threshold
  double view_threshold = 0;    // threshold applied to `annotations`
  std::size_t total = 0;        // annotations before filtering
  AnnotationSet annotations;    // filtered at view_threshold
};

struct TrainingExportEntry {
  std::string slide_id;
  std::string slide_path;
  std::string curated_xml;     // relative to the project directory
  std::string patch_manifest;  // relative to the project directory
  long objects = 0;
  long labeled = 0;
};

struct TrainingExport {
  int loop_index = 1;
  std::vector<TrainingExportEntry> entries;  // sorted by slide_id
  std::map<std::string, long> class_counts;
  long total_objects = 0;
  long total_labeled = 0;
  std::string manifest_path;  // relative to the project directory
};

struct HoldoutItem {
  AnnotationSet ground_truth;
  // Detections to score. When absent the loop's detector runs on slide_path.
  std::optional<AnnotationSet> detections;
  std::optional<std::string> slide_path;
};

// On-disk project storage:
//   <root>/<project_id>/project.json
//   <root>/<project_id>/loops/<n>/loop.json, evaluation.json
//   <root>/<project_id>/loops/<n>/slides/<slide_id>/machine.xml, edits.log,
//       state.json, curated.xml, patches/, labels.json
//   <root>/<project_id>/loops/<n>/export/training_manifest.json
// Writes take a per-project or per-slide file lock; reads do not lock.
class ProjectStore {
 public:
  explicit ProjectStore(std::filesystem::path root);

  // LOOPCURATE_ROOT when set, otherwise ./loopcurate-data.
  static std::filesystem::path DefaultRoot();

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path ProjectDir(std::string_view project_id) const;
  std::filesystem::path SlideDir(std::string_view project_id, int loop,
                                 std::string_view slide_id) const;

  // project_id is the slug of `name`. Duplicate names throw ConflictError.
  Project CreateProject(const std::string& name, const io::ClassConfig& config);
  Project GetProject(std::string_view project_id) const;
  std::vector<std::string> ListProjects() const;

  SlideRegistration RegisterSlide(std::string_view project_id,
                                  const std::filesystem::path& slide_path);

  // Slides default to every registered slide. Throws PreconditionError when
  // the previous loop is not fully curated or the detector is absent on loop
  // 2 or later.
  LoopRecord StartLoop(std::string_view project_id,
                       const std::optional<detect::DetectorSpec>& detector,
                       const std::optional<std::vector<std::string>>& slide_ids = std::nullopt);
  LoopRecord GetLoop(std::string_view project_id, int loop) const;
  // Throws PreconditionError when no loop has started.
  int LatestLoop(std::string_view project_id) const;

  SlideView Annotations(std::string_view project_id, int loop, std::string_view slide_id,
                        std::optional<double> threshold = std::nullopt) const;
  // The current set: replay of the machine set and edit log, carrying the
  // persisted threshold.
  AnnotationSet CurrentSet(std::string_view project_id, int loop,
                           std::string_view slide_id) const;
  // The curated set: CurrentSet filtered at its threshold.
  AnnotationSet CuratedSet(std::string_view project_id, int loop,
                           std::string_view slide_id) const;
  AnnotationSet MachineSet(std::string_view project_id, int loop,
                           std::string_view slide_id) const;
  std::vector<AnnotationEdit> Edits(std::string_view project_id, int loop,
                                    std::string_view slide_id) const;

  // Persists the filter threshold; DETECTED advances to FILTERED.
  SlideView ApplyThreshold(std::string_view project_id, int loop, std::string_view slide_id,
                           double threshold);
  // Appends one batch. Throws ConflictError when `loop` is not the latest
  // loop or expected_revision differs from the committed revision, and
  // PreconditionError outside FILTERED and QA_IN_PROGRESS.
  SlideView SubmitEdits(std::string_view project_id, int loop, std::string_view slide_id,
                        std::vector<AnnotationEdit> edits,
                        std::optional<long> expected_revision = std::nullopt);
  // Writes curated.xml and marks the slide CURATED.
  SlideView Finalize(std::string_view project_id, int loop, std::string_view slide_id);

  // Patches of the curated set (CuratedSet) into the slide's patches/.
  slide::PatchManifest ExtractPatches(std::string_view project_id, int loop,
                                      std::string_view slide_id,
                                      double padding_ratio = slide::kDefaultPaddingRatio);
  std::optional<slide::PatchManifest> PatchManifestFor(std::string_view project_id, int loop,
                                                       std::string_view slide_id) const;
  // Merges records into labels.json; per patch the latest labeled_at wins.
  std::vector<io::PatchLabelRecord> SubmitLabels(std::string_view project_id, int loop,
                                                 std::string_view slide_id,
                                                 std::vector<io::PatchLabelRecord> records);
  std::vector<io::PatchLabelRecord> Labels(std::string_view project_id, int loop,
                                           std::string_view slide_id) const;

  TimingStats RecordTiming(std::string_view project_id, const TimingSample& sample);

  // Throws PreconditionError naming the first uncurated slide. Extracts
  // patches for slides that have none.
  TrainingExport ExportTrainingSet(std::string_view project_id, int loop);

  // Throws DomainError when a holdout slide is registered in the project.
  detect::EvaluationReport EvaluateLoop(std::string_view project_id, int loop,
                                        const std::vector<HoldoutItem>& holdout,
                                        GeometryMode mode = GeometryMode::kCircle);

  // Timing, per-loop stages, curation diffs, label tallies and loop
  // comparisons.
  io::Json Stats(std::string_view project_id) const;

 private:
  void SaveProject(const Project& project) const;
  void SaveLoop(std::string_view project_id, const LoopRecord& record) const;
  void CheckSlideInLoop(std::string_view project_id, int loop, std::string_view slide_id) const;

  std::filesystem::path root_;
};

std::string Slugify(std::string_view name);

io::Json ToJson(const Project& p);
io::Json ToJson(const LoopRecord& r);
io::Json ToJson(const SlideView& v);
io::Json ToJson(const TrainingExport& e);
TrainingExport TrainingExportFromJson(const io::Json& j);

}  // namespace loopcurate::loop
