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
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "loopcurate/core/annotation.hpp"
#include "loopcurate/core/edit.hpp"
#include "loopcurate/core/geometry.hpp"
#include "loopcurate/detect/detector.hpp"
#include "loopcurate/detect/evaluation.hpp"
#include "loopcurate/io/class_config.hpp"
#include "loopcurate/io/file_util.hpp"
#include "loopcurate/io/imagescope_xml.hpp"
#include "loopcurate/io/native_xml.hpp"
#include "loopcurate/io/patch_labels.hpp"
#include "loopcurate/loop/edit_journal.hpp"
#include "loopcurate/loop/store.hpp"
#include "loopcurate/loop/timing.hpp"
#include "loopcurate/slide/png.hpp"
#include "loopcurate/slide/synthetic.hpp"
#include "oracles/ap_oracle.hpp"
#include "oracles/geometry_oracle.hpp"
#include "support/generators.hpp"
#include "support/golden.hpp"
#include "support/golden_fixtures.hpp"
#include "support/project_fixture.hpp"
#include "support/temp_dir.hpp"

namespace lc = loopcurate;
namespace ts = loopcurate::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void Fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail = why;
  o.pass = false;
}

std::string Fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome LaborReduction() {
  Outcome o;
  const double v = lc::loop::LaborReduction(7, 3);
  o.detail = Fmt("labor_reduction(7, 3) = %.6f", v);
  if (std::abs(v - 0.571) > 0.001) Fail(o, o.detail + " outside 0.571 +- 0.001");
  return o;
}

Outcome LoopGain() {
  Outcome o;
  lc::detect::EvaluationReport a, b;
  a.ap = 0.504, a.ap50 = 0.729, a.ap_small = 0.363;
  b.ap = 0.620, b.ap50 = 0.915, b.ap_small = 0.531;
  const auto c = lc::detect::CompareLoops(a, b);
  const double g50 = *c.Field("ap50").relative_gain * 100, gs = *c.Field("ap_small").relative_gain * 100;
  o.detail = Fmt("AP50 gain %.3f%%, AP_S gain %.3f%%", g50, gs);
  if (std::abs(g50 - 25.51) > 0.1 || std::abs(gs - 46.28) > 0.1) Fail(o, o.detail + " (want 25.51%, 46.28%)");
  return o;
}

Outcome ApEngine() {
  Outcome o;
  std::mt19937_64 rng(2026);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const auto f = ts::RandomApFixture(rng, 15);
    const auto mode = i % 4 == 3 ? lc::GeometryMode::kBox : lc::GeometryMode::kCircle;
    const auto got = lc::detect::AveragePrecision(f.dets, f.gts, mode);
    const auto want = lc::oracle::ReferenceAp({{f.dets, f.gts}}, mode);
    worst = std::max(worst, std::abs(got.ap - want.ap));
    for (int k = 0; k < lc::detect::kIouThresholdCount; ++k) {
      worst = std::max(worst, std::abs(got.ap_by_iou[k] - want.per_iou[k]));
    }
    for (auto [g, w] : {std::pair{got.ap_small, want.ap_small}, std::pair{got.ap_medium, want.ap_medium},
                        std::pair{got.ap_large, want.ap_large}}) {
      if (g.has_value() != w.has_value()) Fail(o, "bucket definedness differs from reference");
      if (g && w) worst = std::max(worst, std::abs(*g - *w));
    }
  }
  if (worst > 1e-9) Fail(o, Fmt("AP differs from reference by %.3g", worst));

  int greedy_mismatch = 0;
  for (int i = 0; i < 300; ++i) {
    const auto f = ts::RandomApFixture(rng, 6);
    for (int k = 0; k < lc::detect::kIouThresholdCount; ++k) {
      const double t = lc::detect::IouThresholdAt(k);
      if (lc::detect::MatchDetections(f.dets, f.gts, t).counts.tp !=
          lc::oracle::ExhaustiveMaxTp(f.dets, f.gts, t, lc::GeometryMode::kCircle)) {
        ++greedy_mismatch;
      }
    }
  }
  if (greedy_mismatch) Fail(o, std::to_string(greedy_mismatch) + " greedy/exhaustive TP mismatches");

  std::vector<lc::CircleAnnotation> gts, dets;
  for (int i = 0; i < 6; ++i) {
    lc::CircleAnnotation g{static_cast<lc::AnnotationId>(i + 1), {150.0 * i, 50, 8.0 + 15 * i}, std::nullopt,
                           std::nullopt, lc::Provenance::kHumanAdded, 0};
    gts.push_back(g);
    g.score = 1.0;
    g.provenance = lc::Provenance::kMachine;
    dets.push_back(g);
  }
  const auto perfect = lc::detect::AveragePrecision(dets, gts);
  const auto empty = lc::detect::AveragePrecision({}, gts);
  for (auto v : {perfect.ap, perfect.ap50, perfect.ap75, *perfect.ap_small, *perfect.ap_medium, *perfect.ap_large}) {
    if (v != 1.0) Fail(o, "perfect detections scored below 1");
  }
  for (auto v : {empty.ap, empty.ap50, empty.ap75, *empty.ap_small, *empty.ap_medium, *empty.ap_large}) {
    if (v != 0.0) Fail(o, "empty detections scored above 0");
  }
  if (o.pass) {
    o.detail = Fmt("200 fixtures max |AP - reference| = %.2g; greedy == exhaustive on 300 fixtures x 10 IoU; "
                   "perfect 1.0, empty 0.0",
                   worst);
  }
  return o;
}

Outcome Geometry() {
  Outcome o;
  std::mt19937_64 rng(17);
  double worst_mc = 0, worst_ext = 0;
  for (int i = 0; i < 100; ++i) {
    const lc::Circle a{ts::Uniform(rng, 0, 100), ts::Uniform(rng, 0, 100), ts::Uniform(rng, 5, 50)};
    lc::Circle b{ts::Uniform(rng, 0, 100), ts::Uniform(rng, 0, 100), ts::Uniform(rng, 5, 50)};
    if (i % 5 == 0) b = {a.cx + ts::Uniform(rng, -5, 5), a.cy, a.r * ts::Uniform(rng, 0.8, 1.2)};
    const double iou = lc::CircleIou(a, b);
    worst_mc = std::max(worst_mc, std::abs(iou - lc::oracle::MonteCarloIou(a, b, 1'000'000, 1000 + i)));
    worst_ext = std::max(worst_ext, std::abs(iou - lc::oracle::ExtendedIou(a, b)));
  }
  o.detail = Fmt("100 pairs: max |MC - analytic| = %.2g, max |extended - analytic| = %.2g", worst_mc, worst_ext);
  if (worst_mc > 1e-2 || worst_ext > 1e-9) Fail(o, o.detail);
  return o;
}

Outcome FormatRoundTrips() {
  Outcome o;
  std::mt19937_64 rng(99);
  int native_bad = 0, labels_bad = 0, config_bad = 0, scope_bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto set = ts::RandomSet(rng);
    if (lc::io::ParseNativeXml(lc::io::WriteNativeXml(set)).set != set) ++native_bad;
    const auto config = ts::RandomClassConfig(rng);
    if (lc::io::LoadClassConfig(lc::io::SaveClassConfig(config)) != config) ++config_bad;
    const auto labels = ts::RandomLabels(rng, config);
    if (lc::io::ReadPatchLabels(lc::io::WritePatchLabels(labels, config), config) != labels) ++labels_bad;
    auto all = set;
    all.active_threshold = 0;
    const auto back = lc::io::ImportImageScopeXml(lc::io::WriteImageScopeXml(all, 0.25), all.slide_id).set;
    bool ok = back.annotations.size() == all.annotations.size();
    for (std::size_t k = 0; ok && k < all.annotations.size(); ++k) {
      const auto& p = all.annotations[k].geometry;
      const auto& q = back.annotations[k].geometry;
      ok = std::abs(p.cx - q.cx) <= 1e-4 && std::abs(p.cy - q.cy) <= 1e-4 && std::abs(p.r - q.r) <= 1e-4 &&
           all.annotations[k].score == back.annotations[k].score;
    }
    scope_bad += ok ? 0 : 1;
  }
  int golden_bad = 0;
  for (int run = 0; run < 2; ++run) {
    for (const auto& [name, bytes] : ts::GoldenArtifacts()) {
      if (ts::ReadGolden(name) != bytes) ++golden_bad;
    }
  }
  o.detail = "1000 instances each: native " + std::to_string(native_bad) + ", labels " +
             std::to_string(labels_bad) + ", class config " + std::to_string(config_bad) + ", imagescope " +
             std::to_string(scope_bad) + " failures; golden mismatches " + std::to_string(golden_bad);
  if (native_bad + labels_bad + config_bad + scope_bad + golden_bad) Fail(o, o.detail);
  return o;
}

Outcome Threshold() {
  Outcome o;
  lc::AnnotationSet boundary{"b", {{1, {0, 0, 1}, 0.5, std::nullopt, lc::Provenance::kMachine, 0}}, 0};
  if (lc::FilterByThreshold(boundary, 0.5).annotations.size() != 1) Fail(o, "score == threshold dropped");
  std::mt19937_64 rng(500);
  int violations = 0;
  for (int i = 0; i < 500; ++i) {
    const auto set = ts::RandomSet(rng);
    double t1 = ts::Uniform(rng, 0, 1), t2 = ts::Uniform(rng, 0, 1);
    if (i % 3 == 0) t1 = ts::UniformInt(rng, 0, 20) / 20.0;
    if (t1 > t2) std::swap(t1, t2);
    const auto k1 = lc::FilterByThreshold(set, t1), k2 = lc::FilterByThreshold(set, t2);
    for (const auto& a : k2.annotations) {
      if (!k1.Find(a.id)) ++violations;
    }
    for (const auto& a : set.annotations) {
      const bool kept = k2.Find(a.id) != nullptr;
      const bool want = a.is_human() || (a.score && *a.score >= t2);
      if (kept != want) ++violations;
    }
  }
  o.detail = "500 random sets, " + std::to_string(violations) + " subset/retention violations";
  if (violations) Fail(o, o.detail);
  return o;
}

Outcome EndToEnd() {
  Outcome o;
  ts::TempDir dir;
  lc::slide::SyntheticSpec spec;
  spec.seed = 7;
  spec.n_disks = 50;
  const auto made = lc::slide::MakeSyntheticSlide(spec, dir / "slide");
  lc::loop::ProjectStore store(dir / "root");
  const std::string pid = store.CreateProject("End To End", ts::GlomerulusClasses()).project_id;
  const std::string sid = store.RegisterSlide(pid, made.path).slide_id;
  store.StartLoop(pid, std::nullopt);
  store.Finalize(pid, 1, sid);
  store.StartLoop(pid, lc::detect::DetectorSpec::Builtin());

  const auto machine = store.MachineSet(pid, 2, sid);
  const auto& gts = made.ground_truth.annotations;
  int found = 0;
  std::vector<bool> found_gt(gts.size(), false);
  for (std::size_t g = 0; g < gts.size(); ++g) {
    for (const auto& d : machine.annotations) {
      if (lc::CircleIou(gts[g].geometry, d.geometry) >= 0.7) {
        found_gt[g] = true;
        ++found;
        break;
      }
    }
  }
  const double rate = static_cast<double>(found) / gts.size();
  if (rate < 0.9) Fail(o, Fmt("detected %.0f%% of disks at IoU >= 0.7", rate * 100));

  store.ApplyThreshold(pid, 2, sid, 0.5);
  const lc::Timestamp now(1'760'000'000'000);
  std::vector<lc::AnnotationEdit> edits;
  for (const auto& d : store.CurrentSet(pid, 2, sid).annotations) {
    bool near = false;
    for (const auto& g : gts) near = near || lc::CircleIou(g.geometry, d.geometry) >= 0.5;
    if (!near) edits.push_back(lc::AnnotationEdit::Delete(d.id, now));
  }
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (!found_gt[g]) edits.push_back(lc::AnnotationEdit::Add(gts[g].geometry, now));
  }
  const auto view = store.Annotations(pid, 2, sid);
  if (!view.annotations.annotations.empty()) {
    const auto& first = view.annotations.annotations.front();
    lc::Circle moved = first.geometry;
    moved.cx += 1.5;
    edits.push_back(lc::AnnotationEdit::Move(first.id, moved, now));
  }
  store.SubmitEdits(pid, 2, sid, edits, view.revision);
  store.Finalize(pid, 2, sid);

  const auto manifest = store.ExtractPatches(pid, 2, sid);
  const auto handle = lc::slide::OpenSlide(made.path);
  const auto patch_dir = store.SlideDir(pid, 2, sid) / "patches";
  int bad_patches = 0;
  std::vector<lc::io::PatchLabelRecord> labels;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto& e = manifest.entries[i];
    const auto png = lc::slide::DecodePng(lc::io::ReadFile(patch_dir / e.patch_file));
    if (png != lc::slide::ReadRegion(handle, 0, e.origin_x, e.origin_y, e.width, e.height).pixels) ++bad_patches;
    if (i % 3 != 2) labels.push_back({e.patch_file, sid, e.annotation_id, i % 3 == 0 ? "GDG" : "GOG", now, "qa"});
  }
  store.SubmitLabels(pid, 2, sid, labels);
  const auto ex = store.ExportTrainingSet(pid, 2);
  long class_sum = 0;
  for (const auto& [code, n] : ex.class_counts) class_sum += n;
  const long curated = static_cast<long>(store.CuratedSet(pid, 2, sid).annotations.size());
  const bool consistent = ex.total_objects == curated && ex.total_labeled == static_cast<long>(labels.size()) &&
                          class_sum == ex.total_labeled &&
                          static_cast<long>(manifest.entries.size()) == curated;
  if (bad_patches) Fail(o, std::to_string(bad_patches) + " patches differ from read_region");
  if (!consistent) Fail(o, "export counts inconsistent with labels");
  if (o.pass) {
    o.detail = Fmt("%.0f%% disks detected at IoU >= 0.7; %.0f patches equal read_region; export %.0f objects",
                   rate * 100, static_cast<double>(manifest.entries.size()), static_cast<double>(ex.total_objects));
    o.detail += ", " + std::to_string(ex.total_labeled) + " labeled = sum of class counts";
  }
  return o;
}

Outcome CrashSafety() {
  Outcome o;
  ts::ProjectFixture fx(1, 4);
  fx.store.StartLoop(fx.project_id, std::nullopt);
  const lc::Timestamp now(1'760'000'000'000);
  std::mt19937_64 rng(100);
  int pre = 0, post = 0, bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto before = fx.store.CurrentSet(fx.project_id, 1, "slide1");
    const long revision = fx.store.Annotations(fx.project_id, 1, "slide1").revision;
    std::vector<lc::AnnotationEdit> batch = {lc::AnnotationEdit::Add({100.0 + trial, 200, 12}, now)};
    if (!before.annotations.empty()) {
      const auto& victim = before.annotations[rng() % before.annotations.size()];
      batch.push_back(rng() % 2 ? lc::AnnotationEdit::Delete(victim.id, now)
                                : lc::AnnotationEdit::Resize(victim.id, {victim.geometry.cx, victim.geometry.cy, 15}, now));
    }
    for (auto& e : batch) e.loop_index = 1;
    const auto after = lc::Replay(before, batch);
    const std::size_t line = lc::loop::EncodeJournalLine({revision + 1, batch}).size();
    const std::size_t cut = trial % 3 == 0 ? line : rng() % line;
    const pid_t child = ::fork();
    if (child < 0) {
      Fail(o, "fork failed");
      break;
    }
    if (child == 0) {
      lc::loop::SetJournalCrashPoint(cut);
      try {
        fx.store.SubmitEdits(fx.project_id, 1, "slide1", batch);
      } catch (...) {
      }
      ::_exit(0);
    }
    int status = 0;
    ::waitpid(child, &status, 0);
    if (!WIFSIGNALED(status)) ++bad;
    const auto now_set = fx.store.CurrentSet(fx.project_id, 1, "slide1");
    if (now_set == before) {
      ++pre;
    } else if (now_set == after) {
      ++post;
    } else {
      ++bad;
    }
  }
  o.detail = "100 killed submits: " + std::to_string(pre) + " pre-edit, " + std::to_string(post) +
             " post-edit, " + std::to_string(bad) + " inconsistent";
  if (bad) Fail(o, o.detail);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"labor-reduction", LaborReduction},
      {"loop-gain", LoopGain},
      {"ap-engine", ApEngine},
      {"geometry", Geometry},
      {"format-round-trips", FormatRoundTrips},
      {"threshold-semantics", Threshold},
      {"end-to-end-synthetic-loop", EndToEnd},
      {"crash-safety", CrashSafety},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
