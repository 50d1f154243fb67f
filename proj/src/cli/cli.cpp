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
#include "loopcurate/cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <ostream>

#include "CLI11.hpp"
#include "loopcurate/core/annotation.hpp"
#include "loopcurate/core/error.hpp"
#include "loopcurate/detect/detector.hpp"
#include "loopcurate/detect/evaluation.hpp"
#include "loopcurate/io/class_config.hpp"
#include "loopcurate/io/file_util.hpp"
#include "loopcurate/io/imagescope_xml.hpp"
#include "loopcurate/io/json_codec.hpp"
#include "loopcurate/io/native_xml.hpp"
#include "loopcurate/io/patch_labels.hpp"
#include "loopcurate/loop/api.hpp"
#include "loopcurate/loop/store.hpp"
#include "loopcurate/loop/timing.hpp"
#include "loopcurate/slide/patches.hpp"
#include "loopcurate/slide/synthetic.hpp"

namespace loopcurate::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

struct Options {
  std::string root;
  std::string format = "table";
  double default_threshold = 0.5;

  // synth
  std::uint64_t seed = 7;
  int disks = 50;
  int width = 4096;
  int height = 4096;
  double synth_min_radius = 40.0;
  double synth_max_radius = 90.0;
  int levels = 3;
  int tile_size = 256;

  // shared
  std::string slide;
  std::string in;
  std::string out;
  std::string slide_id;

  // detect
  std::string detector = "builtin";
  std::string command;
  int intensity = 180;
  double min_radius = 8.0;
  double max_radius = 1000.0;
  std::string version_tag;
  int loop = 0;

  // filter / convert / extract
  std::optional<double> threshold;
  std::string to;
  double mpp = 0.25;
  double padding = slide::kDefaultPaddingRatio;

  // evaluate
  std::vector<std::string> dets;
  std::vector<std::string> gts;
  std::string mode = "circle";
  std::vector<std::string> compare;

  // labels
  std::string config;
  std::string class_code;

  // stats
  std::string project;
  std::optional<double> manual;
  std::optional<double> assisted;

  // serve
  std::string host = "127.0.0.1";
  int port = 8080;
};

// Output of a subcommand: JSON for --format json, `text` (when set) or a
// flattened key/value listing for --format table.
struct Result {
  Json json;
  std::optional<std::string> text;
};

void Flatten(const Json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) Flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) Flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << "\t" << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

AnnotationSet ReadSet(const std::string& path) {
  return io::ParseNativeXml(io::ReadFile(path)).set;
}

Json SetSummary(const AnnotationSet& set) {
  return {{"slide_id", set.slide_id},
          {"threshold", set.active_threshold},
          {"annotations", set.annotations.size()}};
}

Result Synth(const Options& o) {
  slide::SyntheticSpec spec;
  spec.seed = o.seed;
  spec.n_disks = o.disks;
  spec.width = o.width;
  spec.height = o.height;
  spec.min_radius = o.synth_min_radius;
  spec.max_radius = o.synth_max_radius;
  spec.levels = o.levels;
  spec.tile_size = o.tile_size;
  spec.slide_id = o.slide_id;
  const slide::SyntheticSlide s = slide::MakeSyntheticSlide(spec, o.out);
  const fs::path gt = fs::path(o.out) / "ground_truth.xml";
  io::WriteFileAtomic(gt, io::WriteNativeXml(s.ground_truth));
  return {{{"slide_id", s.ground_truth.slide_id},
           {"path", o.out},
           {"disks", s.ground_truth.annotations.size()},
           {"levels", s.levels.size()},
           {"ground_truth", gt.string()}},
          std::nullopt};
}

// Writes `set` to --out, or returns it for stdout.
Result EmitSet(const Options& o, const AnnotationSet& set, Json summary) {
  if (!o.out.empty()) {
    io::WriteFileAtomic(o.out, io::WriteNativeXml(set));
    summary["out"] = o.out;
    return {summary, std::nullopt};
  }
  if (o.format == "json") return {io::ToJson(set), std::nullopt};
  return {summary, io::WriteNativeXml(set)};
}

Result Detect(const Options& o) {
  detect::DetectorSpec spec;
  if (o.detector == "builtin") {
    spec = detect::DetectorSpec::Builtin(o.intensity, o.min_radius, o.max_radius,
                                         o.version_tag.empty() ? "builtin-blob" : o.version_tag);
  } else {
    if (o.command.empty()) throw DomainError("--command is required for the external detector");
    spec = detect::DetectorSpec::External(o.command, o.version_tag.empty() ? "external" : o.version_tag);
  }
  const AnnotationSet set = detect::Detect(slide::OpenSlide(o.slide), spec, o.loop);
  Json summary = SetSummary(set);
  summary["detector"] = detect::ToJson(spec);
  return EmitSet(o, set, summary);
}

Result Filter(const Options& o) {
  const AnnotationSet in = ReadSet(o.in);
  const double t = o.threshold.value_or(o.default_threshold);
  const AnnotationSet kept = FilterByThreshold(in, t);
  return EmitSet(o, kept,
                 {{"slide_id", kept.slide_id},
                  {"threshold", t},
                  {"total", in.annotations.size()},
                  {"kept", kept.annotations.size()}});
}

Result Convert(const Options& o) {
  const std::string bytes = io::ReadFile(o.in);
  std::string converted;
  Json summary;
  if (o.to == "imagescope") {
    const AnnotationSet set = io::ParseNativeXml(bytes).set;
    converted = io::WriteImageScopeXml(set, o.mpp);
    summary = SetSummary(set);
  } else {
    const std::string id = o.slide_id.empty() ? fs::path(o.in).stem().string() : o.slide_id;
    const io::ImageScopeImport imp = io::ImportImageScopeXml(bytes, id);
    converted = io::WriteNativeXml(imp.set);
    summary = SetSummary(imp.set);
    summary["skipped_regions"] = imp.skipped_regions;
    Json warnings = Json::array();
    for (const auto& w : imp.warnings) warnings.push_back(w.message + " (" + w.location.ToString() + ")");
    summary["warnings"] = std::move(warnings);
  }
  summary["to"] = o.to;
  if (!o.out.empty()) {
    io::WriteFileAtomic(o.out, converted);
    summary["out"] = o.out;
    return {summary, std::nullopt};
  }
  if (o.format == "json") {
    summary["xml"] = converted;
    return {summary, std::nullopt};
  }
  return {summary, converted};
}

Result Extract(const Options& o) {
  const slide::PatchManifest m =
      slide::ExtractPatches(slide::OpenSlide(o.slide), ReadSet(o.in), o.padding, o.out);
  return {io::ParseJson(slide::WritePatchManifest(m)), std::nullopt};
}

Result Evaluate(const Options& o) {
  const GeometryMode mode = detect::ParseGeometryMode(o.mode);
  if (!o.compare.empty()) {
    if (o.compare.size() != 2) throw DomainError("--compare takes two report files");
    const auto a = detect::EvaluationReportFromJson(io::ParseJson(io::ReadFile(o.compare[0])));
    const auto b = detect::EvaluationReportFromJson(io::ParseJson(io::ReadFile(o.compare[1])));
    return {detect::ToJson(detect::CompareLoops(a, b)), std::nullopt};
  }
  if (o.dets.size() != o.gts.size() || o.gts.empty()) {
    throw DomainError("--dets and --gts must be given in pairs");
  }
  std::vector<detect::EvaluationImage> images;
  for (std::size_t i = 0; i < o.gts.size(); ++i) {
    images.push_back({ReadSet(o.dets[i]).annotations, ReadSet(o.gts[i]).annotations});
  }
  const detect::EvaluationReport report = detect::AveragePrecision(images, mode);
  Json j = detect::ToJson(report);
  if (!o.out.empty()) {
    io::WriteFileAtomic(o.out, io::CanonicalJson(j));
    j["out"] = o.out;
  }
  if (o.format == "table") j.erase("pr_curves");
  return {j, std::nullopt};
}

Result Labels(const Options& o) {
  const io::ClassConfig config = io::LoadClassConfig(io::ReadFile(o.config));
  auto records = io::ReadPatchLabels(io::ReadFile(o.in), config);
  if (!o.class_code.empty()) {
    if (!config.HasCode(o.class_code)) throw DomainError("unknown class code '" + o.class_code + "'");
    records = io::QueryLabels(records, o.class_code);
  }
  std::map<std::string, long> tally;
  for (const auto& c : config.classes) tally[c.code] = 0;
  Json list = Json::array();
  for (const auto& r : records) {
    ++tally[r.class_code];
    list.push_back(io::ToJson(r));
  }
  return {{{"count", records.size()}, {"tally", tally}, {"records", std::move(list)}}, std::nullopt};
}

Result Stats(const Options& o) {
  if (o.manual || o.assisted) {
    if (!o.manual || !o.assisted) throw DomainError("--manual and --assisted go together");
    return {{{"manual_seconds_per_object", *o.manual},
             {"assisted_seconds_per_object", *o.assisted},
             {"labor_reduction", loop::LaborReduction(*o.manual, *o.assisted)}},
            std::nullopt};
  }
  if (o.project.empty()) throw DomainError("--project or --manual/--assisted is required");
  loop::ProjectStore store(o.root);
  return {store.Stats(o.project), std::nullopt};
}

int Serve(const Options& o, std::ostream& out) {
  loop::ProjectStore store(o.root);
  loop::ApiServer server(store);
  const int port = server.Bind(o.host, o.port);
  out << "listening on http://" << o.host << ":" << port << " root " << store.root().string()
      << std::endl;
  server.Run();
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Human-in-the-loop curation of circular objects in whole slide images.",
               "loopcurate"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--root", o.root, "Project storage root")->envname("LOOPCURATE_ROOT");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--default-threshold", o.default_threshold, "Threshold used when --threshold is absent")
      ->check(CLI::Range(0.0, 1.0));

  std::function<Result()> action;
  bool serve = false;

  auto* synth = app.add_subcommand("synth", "Write a synthetic tiled slide with ground truth");
  synth->add_option("--seed", o.seed, "Random seed");
  synth->add_option("--disks", o.disks, "Number of disks");
  synth->add_option("--width", o.width, "Level-0 width");
  synth->add_option("--height", o.height, "Level-0 height");
  synth->add_option("--min-radius", o.synth_min_radius, "Smallest disk radius");
  synth->add_option("--max-radius", o.synth_max_radius, "Largest disk radius");
  synth->add_option("--levels", o.levels, "Pyramid levels");
  synth->add_option("--tile-size", o.tile_size, "Tile edge in pixels");
  synth->add_option("--slide-id", o.slide_id, "Slide id (default synthetic-<seed>)");
  synth->add_option("--out", o.out, "Output directory")->required();
  synth->callback([&] { action = [&] { return Synth(o); }; });

  auto* det = app.add_subcommand("detect", "Run a detector on a slide");
  det->add_option("--slide", o.slide, "Slide directory")->required();
  det->add_option("--detector", o.detector, "Detector kind")->check(CLI::IsMember({"builtin", "external"}));
  det->add_option("--command", o.command, "External command ({slide} and {out} placeholders)");
  det->add_option("--intensity", o.intensity, "Luma threshold of the built-in detector");
  det->add_option("--min-radius", o.min_radius, "Smallest accepted radius (level-0 px)");
  det->add_option("--max-radius", o.max_radius, "Largest accepted radius (level-0 px)");
  det->add_option("--version-tag", o.version_tag, "Detector version tag");
  det->add_option("--loop", o.loop, "Loop index stamped on detections");
  det->add_option("--out", o.out, "Native XML output file (stdout when absent)");
  det->callback([&] { action = [&] { return Detect(o); }; });

  auto* filter = app.add_subcommand("filter", "Keep annotations scoring at least the threshold");
  filter->add_option("--in", o.in, "Native XML input")->required();
  filter->add_option("--threshold", o.threshold, "Score threshold in [0,1]");
  filter->add_option("--out", o.out, "Native XML output file (stdout when absent)");
  filter->callback([&] { action = [&] { return Filter(o); }; });

  auto* convert = app.add_subcommand("convert", "Convert between native and ImageScope XML");
  convert->add_option("--in", o.in, "Input XML")->required();
  convert->add_option("--to", o.to, "Target format")->required()->check(CLI::IsMember({"imagescope", "native"}));
  convert->add_option("--mpp", o.mpp, "Microns per pixel written to ImageScope XML");
  convert->add_option("--slide-id", o.slide_id, "Slide id for imported sets (default: file stem)");
  convert->add_option("--out", o.out, "Output file (stdout when absent)");
  convert->callback([&] { action = [&] { return Convert(o); }; });

  auto* extract = app.add_subcommand("extract", "Save one patch per kept annotation");
  extract->add_option("--slide", o.slide, "Slide directory")->required();
  extract->add_option("--in", o.in, "Native XML annotations")->required();
  extract->add_option("--out", o.out, "Patch directory")->required();
  extract->add_option("--padding", o.padding, "Padding ratio around each circle");
  extract->callback([&] { action = [&] { return Extract(o); }; });

  auto* evaluate = app.add_subcommand("evaluate", "Average precision of detections against ground truth");
  evaluate->add_option("--dets", o.dets, "Detection XML (repeat per slide)");
  evaluate->add_option("--gts", o.gts, "Ground truth XML (repeat per slide)");
  evaluate->add_option("--mode", o.mode, "IoU geometry")->check(CLI::IsMember({"circle", "box"}));
  evaluate->add_option("--compare", o.compare, "Compare two saved reports instead")->expected(2);
  evaluate->add_option("--out", o.out, "Write the report JSON here");
  evaluate->callback([&] { action = [&] { return Evaluate(o); }; });

  auto* labels = app.add_subcommand("labels", "Query patch labels");
  labels->add_option("--in", o.in, "Patch label JSON")->required();
  labels->add_option("--config", o.config, "Class configuration")->required();
  labels->add_option("--class", o.class_code, "Only this class code");
  labels->callback([&] { action = [&] { return Labels(o); }; });

  auto* stats = app.add_subcommand("stats", "Project statistics or labor reduction");
  stats->add_option("--project", o.project, "Project id under --root");
  stats->add_option("--manual", o.manual, "Manual seconds per object");
  stats->add_option("--assisted", o.assisted, "Assisted seconds per object");
  stats->callback([&] { action = [&] { return Stats(o); }; });

  auto* srv = app.add_subcommand("serve", "Serve the HTTP API");
  srv->add_option("--host", o.host, "Bind address");
  srv->add_option("--port", o.port, "Port (0 picks a free one)");
  srv->callback([&] { serve = true; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  if (o.root.empty()) o.root = loop::ProjectStore::DefaultRoot().string();
  try {
    if (serve) return Serve(o, out);
    const Result r = action();
    if (o.format == "json") {
      out << io::CanonicalJson(r.json);
    } else if (r.text) {
      out << *r.text;
    } else {
      Flatten(r.json, "", out);
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << ErrorCodeName(e.code()) << ": " << e.what() << "\n";
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
}

}  // namespace loopcurate::cli
