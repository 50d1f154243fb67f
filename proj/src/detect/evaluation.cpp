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
#include "loopcurate/detect/evaluation.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <tuple>

#include "loopcurate/core/error.hpp"
#include "loopcurate/io/number_format.hpp"

namespace loopcurate::detect {

double IouThresholdAt(int index) { return (50.0 + 5.0 * index) / 100.0; }

std::string_view GeometryModeName(GeometryMode mode) {
  return mode == GeometryMode::kCircle ? "CIRCLE" : "BOX";
}

GeometryMode ParseGeometryMode(std::string_view name) {
  if (name == "CIRCLE" || name == "circle") return GeometryMode::kCircle;
  if (name == "BOX" || name == "box") return GeometryMode::kBox;
  throw DomainError("unknown geometry mode '" + std::string(name) + "'");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct AreaRange {
  double lo;
  double hi;
  bool Contains(double area) const { return area >= lo && area < hi; }
};

constexpr AreaRange kAll{0.0, kInf};
constexpr AreaRange kSmall{0.0, kSmallAreaLimit};
constexpr AreaRange kMedium{kSmallAreaLimit, kMediumAreaLimit};
constexpr AreaRange kLarge{kMediumAreaLimit, kInf};

double ScoreOf(const CircleAnnotation& a) { return a.score.value_or(1.0); }

// Detection order and the IoU matrix, shared by every threshold and bucket.
struct PreparedImage {
  std::vector<const CircleAnnotation*> dets;  // score desc, id asc
  std::vector<const CircleAnnotation*> gts;   // id asc
  std::vector<double> iou;                    // dets.size() x gts.size()
  std::vector<double> det_area;
  std::vector<double> gt_area;
};

PreparedImage Prepare(std::span<const CircleAnnotation> dets,
                      std::span<const CircleAnnotation> gts, GeometryMode mode) {
  PreparedImage p;
  for (const auto& d : dets) {
    ValidateCircle(d.geometry);
    p.dets.push_back(&d);
  }
  for (const auto& g : gts) {
    ValidateCircle(g.geometry);
    p.gts.push_back(&g);
  }
  std::stable_sort(p.dets.begin(), p.dets.end(), [](const auto* a, const auto* b) {
    const double sa = ScoreOf(*a), sb = ScoreOf(*b);
    if (sa != sb) return sa > sb;
    return a->id < b->id;
  });
  std::stable_sort(p.gts.begin(), p.gts.end(),
                   [](const auto* a, const auto* b) { return a->id < b->id; });
  p.iou.resize(p.dets.size() * p.gts.size());
  for (std::size_t i = 0; i < p.dets.size(); ++i) {
    for (std::size_t j = 0; j < p.gts.size(); ++j) {
      p.iou[i * p.gts.size() + j] = Iou(p.dets[i]->geometry, p.gts[j]->geometry, mode);
    }
  }
  for (const auto* d : p.dets) p.det_area.push_back(Area(d->geometry, mode));
  for (const auto* g : p.gts) p.gt_area.push_back(Area(g->geometry, mode));
  return p;
}

struct ImageMatch {
  std::vector<int> gt_for_det;  // -1 when unmatched
  std::vector<bool> det_ignored;
  long gt_count = 0;  // non-ignored ground truth
};

ImageMatch Match(const PreparedImage& p, double threshold, const AreaRange& range) {
  const std::size_t nd = p.dets.size(), ng = p.gts.size();
  ImageMatch m;
  m.gt_for_det.assign(nd, -1);
  m.det_ignored.assign(nd, false);
  std::vector<bool> gt_ignored(ng);
  for (std::size_t j = 0; j < ng; ++j) {
    gt_ignored[j] = !range.Contains(p.gt_area[j]);
    if (!gt_ignored[j]) ++m.gt_count;
  }
  std::vector<bool> taken(ng, false);
  for (std::size_t i = 0; i < nd; ++i) {
    int best = -1;
    for (std::size_t j = 0; j < ng; ++j) {
      const double v = p.iou[i * ng + j];
      if (taken[j] || v < threshold) continue;
      if (best < 0) {
        best = static_cast<int>(j);
        continue;
      }
      const double bv = p.iou[i * ng + best];
      // Non-ignored first, then higher IoU; equal keys keep the lower id.
      if (std::tuple(!gt_ignored[j], v) > std::tuple(!gt_ignored[best], bv)) {
        best = static_cast<int>(j);
      }
    }
    if (best >= 0) {
      taken[best] = true;
      m.gt_for_det[i] = best;
      m.det_ignored[i] = gt_ignored[best];
    } else {
      m.det_ignored[i] = !range.Contains(p.det_area[i]);
    }
  }
  return m;
}

struct Ranked {
  double score;
  bool tp;
};

// Non-ignored detections of every image ordered by score, image order breaking
// ties.
std::vector<Ranked> Rank(const std::vector<PreparedImage>& images,
                         const std::vector<ImageMatch>& matches, long* gt_total) {
  std::vector<Ranked> out;
  *gt_total = 0;
  for (std::size_t k = 0; k < images.size(); ++k) {
    *gt_total += matches[k].gt_count;
    for (std::size_t i = 0; i < images[k].dets.size(); ++i) {
      if (matches[k].det_ignored[i]) continue;
      out.push_back({ScoreOf(*images[k].dets[i]), matches[k].gt_for_det[i] >= 0});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Ranked& a, const Ranked& b) { return a.score > b.score; });
  return out;
}

double InterpolatedAp(const std::vector<Ranked>& ranked, long gt_total) {
  const std::size_t n = ranked.size();
  std::vector<double> precision(n), recall(n);
  long tp = 0, fp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ranked[i].tp ? ++tp : ++fp;
    precision[i] = static_cast<double>(tp) / static_cast<double>(tp + fp);
    recall[i] = static_cast<double>(tp) / static_cast<double>(gt_total);
  }
  for (std::size_t i = n; i-- > 1;) precision[i - 1] = std::max(precision[i - 1], precision[i]);
  double sum = 0.0;
  for (int k = 0; k < kRecallPointCount; ++k) {
    const double r = k / 100.0;
    const auto it = std::lower_bound(recall.begin(), recall.end(), r);
    if (it != recall.end()) sum += precision[static_cast<std::size_t>(it - recall.begin())];
  }
  return sum / kRecallPointCount;
}

std::vector<PRPoint> Sweep(const std::vector<Ranked>& ranked, long gt_total) {
  std::vector<PRPoint> out;
  long tp = 0, fp = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    ranked[i].tp ? ++tp : ++fp;
    if (i + 1 < ranked.size() && ranked[i + 1].score == ranked[i].score) continue;
    out.push_back({ranked[i].score, static_cast<double>(tp) / static_cast<double>(tp + fp),
                   static_cast<double>(tp) / static_cast<double>(gt_total)});
  }
  return out;
}

std::optional<double> BucketAp(const std::vector<PreparedImage>& images, const AreaRange& range) {
  double sum = 0.0;
  for (int t = 0; t < kIouThresholdCount; ++t) {
    std::vector<ImageMatch> matches;
    for (const auto& img : images) matches.push_back(Match(img, IouThresholdAt(t), range));
    long gt_total = 0;
    const auto ranked = Rank(images, matches, &gt_total);
    if (gt_total == 0) return std::nullopt;
    sum += InterpolatedAp(ranked, gt_total);
  }
  return sum / kIouThresholdCount;
}

}  // namespace

MatchResult MatchDetections(std::span<const CircleAnnotation> detections,
                            std::span<const CircleAnnotation> ground_truth, double iou_threshold,
                            GeometryMode mode) {
  const PreparedImage p = Prepare(detections, ground_truth, mode);
  const ImageMatch m = Match(p, iou_threshold, kAll);
  MatchResult result;
  for (std::size_t i = 0; i < p.dets.size(); ++i) {
    MatchPair pair;
    pair.detection_id = p.dets[i]->id;
    if (const int g = m.gt_for_det[i]; g >= 0) {
      pair.ground_truth_id = p.gts[g]->id;
      pair.iou = p.iou[i * p.gts.size() + g];
      ++result.counts.tp;
    } else {
      ++result.counts.fp;
    }
    result.pairing.push_back(pair);
  }
  result.counts.fn = static_cast<long>(p.gts.size()) - result.counts.tp;
  return result;
}

std::vector<PRPoint> PrecisionRecallCurve(std::span<const CircleAnnotation> detections,
                                          std::span<const CircleAnnotation> ground_truth,
                                          double iou_threshold, GeometryMode mode) {
  if (ground_truth.empty()) throw DomainError("undefined recall: no ground truth");
  std::vector<PreparedImage> images;
  images.push_back(Prepare(detections, ground_truth, mode));
  std::vector<ImageMatch> matches{Match(images[0], iou_threshold, kAll)};
  long gt_total = 0;
  const auto ranked = Rank(images, matches, &gt_total);
  return Sweep(ranked, gt_total);
}

EvaluationReport AveragePrecision(std::span<const EvaluationImage> images, GeometryMode mode) {
  std::vector<PreparedImage> prepared;
  std::size_t gt_count = 0;
  for (const auto& img : images) {
    prepared.push_back(Prepare(img.detections, img.ground_truth, mode));
    gt_count += img.ground_truth.size();
  }
  if (gt_count == 0) throw DomainError("average precision needs ground truth");

  EvaluationReport report;
  report.geometry_mode = mode;
  double sum = 0.0;
  for (int t = 0; t < kIouThresholdCount; ++t) {
    const double threshold = IouThresholdAt(t);
    std::vector<ImageMatch> matches;
    for (const auto& img : prepared) matches.push_back(Match(img, threshold, kAll));
    long gt_total = 0;
    const auto ranked = Rank(prepared, matches, &gt_total);
    report.ap_by_iou[t] = InterpolatedAp(ranked, gt_total);
    report.pr_curves[threshold] = Sweep(ranked, gt_total);
    sum += report.ap_by_iou[t];
    if (t == 0) {
      for (const auto& r : ranked) r.tp ? ++report.counts.tp : ++report.counts.fp;
      report.counts.fn = gt_total - report.counts.tp;
    }
  }
  report.ap = sum / kIouThresholdCount;
  report.ap50 = report.ap_by_iou[0];
  report.ap75 = report.ap_by_iou[5];
  report.ap_small = BucketAp(prepared, kSmall);
  report.ap_medium = BucketAp(prepared, kMedium);
  report.ap_large = BucketAp(prepared, kLarge);
  return report;
}

EvaluationReport AveragePrecision(std::span<const CircleAnnotation> detections,
                                  std::span<const CircleAnnotation> ground_truth,
                                  GeometryMode mode) {
  const EvaluationImage image{{detections.begin(), detections.end()},
                              {ground_truth.begin(), ground_truth.end()}};
  return AveragePrecision(std::span<const EvaluationImage>(&image, 1), mode);
}

const FieldComparison& LoopComparison::Field(std::string_view name) const {
  for (const auto& f : fields) {
    if (f.field == name) return f;
  }
  throw NotFoundError("no comparison field '" + std::string(name) + "'");
}

std::optional<double> RelativeGain(double before, double after) {
  if (before == 0.0) return std::nullopt;
  return (after - before) / before;
}

LoopComparison CompareLoops(const EvaluationReport& a, const EvaluationReport& b) {
  if (a.geometry_mode != b.geometry_mode) {
    throw DomainError("cannot compare reports with different geometry modes");
  }
  LoopComparison out;
  out.geometry_mode = a.geometry_mode;
  auto add = [&](std::string name, std::optional<double> x, std::optional<double> y) {
    FieldComparison f{std::move(name), x, y, std::nullopt, std::nullopt};
    if (x && y) {
      f.delta = *y - *x;
      f.relative_gain = RelativeGain(*x, *y);
    }
    out.fields.push_back(std::move(f));
  };
  add("ap", a.ap, b.ap);
  add("ap50", a.ap50, b.ap50);
  add("ap75", a.ap75, b.ap75);
  add("ap_small", a.ap_small, b.ap_small);
  add("ap_medium", a.ap_medium, b.ap_medium);
  add("ap_large", a.ap_large, b.ap_large);
  return out;
}

namespace {

io::Json Optional(const std::optional<double>& v) { return v ? io::Json(*v) : io::Json(nullptr); }

std::optional<double> OptionalNumber(const io::Json& j, const char* key) {
  const io::Json& v = io::RequireField(j, key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw ValidationError(std::string("'") + key + "' must be a number or null");
  return v.get<double>();
}

}  // namespace

io::Json ToJson(const MatchCounts& c) { return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}}; }

io::Json ToJson(const EvaluationReport& r) {
  io::Json curves = io::Json::object();
  for (const auto& [t, points] : r.pr_curves) {
    io::Json list = io::Json::array();
    for (const auto& p : points) {
      list.push_back({{"threshold", p.threshold}, {"precision", p.precision}, {"recall", p.recall}});
    }
    curves[io::FormatScore(t)] = std::move(list);
  }
  return {{"geometry_mode", std::string(GeometryModeName(r.geometry_mode))},
          {"ap", r.ap},
          {"ap50", r.ap50},
          {"ap75", r.ap75},
          {"ap_small", Optional(r.ap_small)},
          {"ap_medium", Optional(r.ap_medium)},
          {"ap_large", Optional(r.ap_large)},
          {"ap_by_iou", r.ap_by_iou},
          {"counts", ToJson(r.counts)},
          {"pr_curves", std::move(curves)}};
}

EvaluationReport EvaluationReportFromJson(const io::Json& j) {
  EvaluationReport r;
  try {
    r.geometry_mode = ParseGeometryMode(io::RequireString(j, "geometry_mode"));
  } catch (const DomainError& e) {
    throw ValidationError(e.message());
  }
  r.ap = io::RequireNumber(j, "ap");
  r.ap50 = io::RequireNumber(j, "ap50");
  r.ap75 = io::RequireNumber(j, "ap75");
  r.ap_small = OptionalNumber(j, "ap_small");
  r.ap_medium = OptionalNumber(j, "ap_medium");
  r.ap_large = OptionalNumber(j, "ap_large");
  try {
    if (auto it = j.find("ap_by_iou"); it != j.end()) {
      r.ap_by_iou = it->get<std::array<double, kIouThresholdCount>>();
    }
    if (auto it = j.find("counts"); it != j.end()) {
      r.counts = {it->at("tp").get<long>(), it->at("fp").get<long>(), it->at("fn").get<long>()};
    }
    if (auto it = j.find("pr_curves"); it != j.end()) {
      for (const auto& [key, list] : it->items()) {
        auto t = io::ParseNumber(key);
        if (!t) throw ValidationError("bad IoU threshold key '" + key + "'");
        auto& points = r.pr_curves[*t];
        for (const auto& p : list) {
          points.push_back({p.at("threshold").get<double>(), p.at("precision").get<double>(),
                            p.at("recall").get<double>()});
        }
      }
    }
  } catch (const io::Json::exception& e) {
    throw ValidationError(e.what());
  }
  return r;
}

io::Json ToJson(const LoopComparison& c) {
  io::Json fields = io::Json::object();
  for (const auto& f : c.fields) {
    fields[f.field] = {{"before", Optional(f.before)},
                       {"after", Optional(f.after)},
                       {"delta", Optional(f.delta)},
                       {"relative_gain", Optional(f.relative_gain)}};
  }
  return {{"geometry_mode", std::string(GeometryModeName(c.geometry_mode))},
          {"fields", std::move(fields)}};
}

}  // namespace loopcurate::detect
