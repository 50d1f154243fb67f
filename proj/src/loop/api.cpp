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
#include "loopcurate/loop/api.hpp"

#include <sstream>
#include <vector>

#include "httplib.h"
#include "loopcurate/io/class_config.hpp"
#include "loopcurate/io/file_util.hpp"
#include "loopcurate/io/number_format.hpp"
#include "loopcurate/slide/png.hpp"
#include "loopcurate/slide/slide.hpp"

namespace loopcurate::loop {

namespace fs = std::filesystem;

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomain:
    case ErrorCode::kParse:
    case ErrorCode::kValidation:
    case ErrorCode::kFormat:
      return 400;
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kConflict: return 409;
    case ErrorCode::kPrecondition: return 422;
    case ErrorCode::kDetector: return 502;
    case ErrorCode::kIo: return 500;
  }
  return 500;
}

io::Json ErrorBody(const Error& error) {
  io::Json body = {{"code", std::string(ErrorCodeName(error.code()))}, {"message", error.message()}};
  if (const auto& loc = error.location()) {
    io::Json l = io::Json::object();
    if (loc->line) l["line"] = *loc->line;
    if (loc->column) l["column"] = *loc->column;
    if (loc->record) l["record"] = *loc->record;
    body["location"] = std::move(l);
  }
  return body;
}

namespace {

struct RouteError : Error {
  RouteError(int status, const std::string& m) : Error(ErrorCode::kNotFound, m), status(status) {}
  int status;
};

std::vector<std::string> Segments(std::string_view path) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < path.size()) {
    const auto next = path.find('/', pos);
    const auto end = next == std::string_view::npos ? path.size() : next;
    if (end > pos) out.emplace_back(path.substr(pos, end - pos));
    pos = end + 1;
  }
  return out;
}

ApiResponse Json(const io::Json& body, int status = 200) {
  return {status, "application/json", io::CanonicalJson(body)};
}

io::Json Body(const ApiRequest& r) {
  if (r.body.empty()) return io::Json::object();
  io::Json j = io::ParseJson(r.body);
  if (!j.is_object()) throw ValidationError("request body must be a JSON object");
  return j;
}

std::optional<std::string> Query(const ApiRequest& r, const std::string& key) {
  auto it = r.query.find(key);
  if (it == r.query.end()) return std::nullopt;
  return it->second;
}

double QueryNumber(const std::string& key, const std::string& value) {
  auto v = io::ParseNumber(value);
  if (!v) throw ValidationError("query parameter '" + key + "' must be a number");
  return *v;
}

long QueryInteger(const ApiRequest& r, const std::string& key, std::optional<long> fallback) {
  auto raw = Query(r, key);
  if (!raw) {
    if (fallback) return *fallback;
    throw ValidationError("query parameter '" + key + "' is required");
  }
  auto v = io::ParseInteger(*raw);
  if (!v) throw ValidationError("query parameter '" + key + "' must be an integer");
  return static_cast<long>(*v);
}

ApiResponse Png(std::string bytes) { return {200, "image/png", std::move(bytes)}; }

class Router {
 public:
  Router(ProjectStore& store, const ApiRequest& r) : store_(store), r_(r), seg_(Segments(r.path)) {}

  ApiResponse Route() {
    if (seg_.empty() || seg_[0] != "projects") NotFound();
    if (seg_.size() == 1) {
      if (Is("GET")) {
        io::Json list = io::Json::array();
        for (const auto& id : store_.ListProjects()) list.push_back(id);
        return Json({{"projects", std::move(list)}});
      }
      if (Is("POST")) return CreateProject();
      return MethodNotAllowed();
    }
    const std::string& pid = seg_[1];
    if (seg_.size() == 2) {
      if (Is("GET")) return Json(ToJson(store_.GetProject(pid)));
      return MethodNotAllowed();
    }
    const std::string& section = seg_[2];
    if (section == "slides") return Slides(pid);
    if (section == "loops") return Loops(pid);
    if (seg_.size() == 3 && section == "timing") {
      if (!Is("POST")) return MethodNotAllowed();
      store_.GetProject(pid);
      return Json(ToJson(store_.RecordTiming(pid, TimingSampleFromJson(Body(r_)))));
    }
    if (seg_.size() == 3 && section == "stats") {
      if (!Is("GET")) return MethodNotAllowed();
      return Json(store_.Stats(pid));
    }
    NotFound();
  }

 private:
  bool Is(const char* m) const { return r_.method == m; }

  [[noreturn]] void NotFound() const { throw RouteError(404, "no route for " + r_.path); }
  ApiResponse MethodNotAllowed() const {
    return Json({{"code", "method_not_allowed"}, {"message", r_.method + " " + r_.path}}, 405);
  }

  int LoopFor(const std::string& pid, const io::Json* body) const {
    if (body && body->contains("loop")) return static_cast<int>(io::RequireInteger(*body, "loop"));
    if (auto q = Query(r_, "loop")) return static_cast<int>(QueryInteger(r_, "loop", std::nullopt));
    return store_.LatestLoop(pid);
  }

  ApiResponse CreateProject() {
    const io::Json body = Body(r_);
    io::ClassConfig config;
    if (body.contains("class_config")) {
      config = io::ClassConfigFromJson(body.at("class_config"));
    } else {
      config = io::LoadClassConfig(io::RequireString(body, "class_config_text"));
    }
    return Json(ToJson(store_.CreateProject(io::RequireString(body, "name"), config)), 201);
  }

  ApiResponse Loops(const std::string& pid) {
    if (seg_.size() == 3) {
      if (!Is("POST")) return MethodNotAllowed();
      const io::Json body = Body(r_);
      std::optional<detect::DetectorSpec> detector;
      if (body.contains("detector") && !body.at("detector").is_null()) {
        detector = detect::DetectorSpecFromJson(body.at("detector"));
      }
      std::optional<std::vector<std::string>> slides;
      if (body.contains("slides") && !body.at("slides").is_null()) {
        slides = body.at("slides").get<std::vector<std::string>>();
      }
      return Json(ToJson(store_.StartLoop(pid, detector, slides)), 201);
    }
    auto n = io::ParseInteger(seg_[3]);
    if (!n) NotFound();
    const int loop = static_cast<int>(*n);
    if (seg_.size() == 4) {
      if (!Is("GET")) return MethodNotAllowed();
      return Json(ToJson(store_.GetLoop(pid, loop)));
    }
    if (seg_.size() != 5) NotFound();
    if (seg_[4] == "export") {
      if (!Is("POST")) return MethodNotAllowed();
      const TrainingExport e = store_.ExportTrainingSet(pid, loop);
      io::Json j = ToJson(e);
      j["manifest_path"] = e.manifest_path;
      return Json(j);
    }
    if (seg_[4] == "evaluate") {
      if (!Is("POST")) return MethodNotAllowed();
      const io::Json body = Body(r_);
      GeometryMode mode = GeometryMode::kCircle;
      if (body.contains("geometry_mode")) {
        try {
          mode = detect::ParseGeometryMode(io::RequireString(body, "geometry_mode"));
        } catch (const DomainError& e) {
          throw ValidationError(e.message());
        }
      }
      std::vector<HoldoutItem> holdout;
      const io::Json& items = io::RequireField(body, "holdout");
      if (!items.is_array()) throw ValidationError("'holdout' must be an array");
      for (std::size_t i = 0; i < items.size(); ++i) {
        const io::Json& item = items[i];
        HoldoutItem h;
        h.ground_truth = io::AnnotationSetFromJson(io::RequireField(item, "ground_truth"));
        if (item.contains("detections")) h.detections = io::AnnotationSetFromJson(item.at("detections"));
        if (item.contains("slide_path")) h.slide_path = io::RequireString(item, "slide_path");
        holdout.push_back(std::move(h));
      }
      return Json(detect::ToJson(store_.EvaluateLoop(pid, loop, holdout, mode)));
    }
    NotFound();
  }

  ApiResponse Slides(const std::string& pid) {
    if (seg_.size() == 3) {
      if (Is("POST")) {
        const io::Json body = Body(r_);
        const SlideRegistration reg = store_.RegisterSlide(pid, io::RequireString(body, "path"));
        return Json({{"slide_id", reg.slide_id}, {"path", reg.path}}, 201);
      }
      if (!Is("GET")) return MethodNotAllowed();
      const Project p = store_.GetProject(pid);
      io::Json list = io::Json::array();
      for (const auto& s : p.slides) {
        io::Json entry = {{"slide_id", s.slide_id}, {"path", s.path}, {"stage", nullptr}};
        if (!p.loops.empty()) {
          auto it = p.loops.back().stages.find(s.slide_id);
          if (it != p.loops.back().stages.end()) entry["stage"] = std::string(SlideStageName(it->second));
        }
        list.push_back(std::move(entry));
      }
      return Json({{"slides", std::move(list)}});
    }
    const std::string& sid = seg_[3];
    if (seg_.size() < 5) NotFound();
    const std::string& action = seg_[4];

    if (action == "patches" && seg_.size() == 6) {
      if (!Is("GET")) return MethodNotAllowed();
      const int loop = LoopFor(pid, nullptr);
      const auto manifest = store_.PatchManifestFor(pid, loop, sid);
      if (!manifest) throw NotFoundError("no patches for slide '" + sid + "'");
      for (const auto& e : manifest->entries) {
        if (e.patch_file == seg_[5]) {
          return Png(io::ReadFile(store_.SlideDir(pid, loop, sid) / "patches" / e.patch_file));
        }
      }
      throw NotFoundError("no patch '" + seg_[5] + "'");
    }
    if (seg_.size() != 5) NotFound();

    if (action == "annotations") {
      if (!Is("GET")) return MethodNotAllowed();
      std::optional<double> threshold;
      if (auto t = Query(r_, "threshold")) threshold = QueryNumber("threshold", *t);
      return Json(ToJson(store_.Annotations(pid, LoopFor(pid, nullptr), sid, threshold)));
    }
    if (action == "region") {
      if (!Is("GET")) return MethodNotAllowed();
      const Project p = store_.GetProject(pid);
      const SlideRegistration* reg = p.FindSlide(sid);
      if (!reg) throw NotFoundError("slide '" + sid + "' is not registered");
      const slide::SlideHandle handle = slide::OpenSlide(reg->path);
      const slide::PatchImage region = slide::ReadRegion(
          handle, static_cast<int>(QueryInteger(r_, "level", 0)), QueryInteger(r_, "x", std::nullopt),
          QueryInteger(r_, "y", std::nullopt), static_cast<int>(QueryInteger(r_, "w", std::nullopt)),
          static_cast<int>(QueryInteger(r_, "h", std::nullopt)));
      return Png(slide::EncodePng(region.pixels));
    }
    if (action == "labels" && Is("GET")) {
      io::Json list = io::Json::array();
      for (const auto& l : store_.Labels(pid, LoopFor(pid, nullptr), sid)) list.push_back(io::ToJson(l));
      return Json({{"records", std::move(list)}});
    }
    if (action == "patches" && Is("GET")) {
      const auto manifest = store_.PatchManifestFor(pid, LoopFor(pid, nullptr), sid);
      if (!manifest) throw NotFoundError("no patches for slide '" + sid + "'");
      return Json(io::ParseJson(slide::WritePatchManifest(*manifest)));
    }
    if (!Is("POST")) return MethodNotAllowed();

    const io::Json body = Body(r_);
    const int loop = LoopFor(pid, &body);
    if (action == "edits") {
      std::vector<AnnotationEdit> edits;
      const io::Json& list = io::RequireField(body, "edits");
      if (!list.is_array()) throw ValidationError("'edits' must be an array");
      for (std::size_t i = 0; i < list.size(); ++i) {
        try {
          edits.push_back(io::EditFromJson(list[i]));
        } catch (const ValidationError& e) {
          throw ValidationError(e.message(), SourceLocation::Record(static_cast<int>(i)));
        }
      }
      std::optional<long> expected;
      if (body.contains("expected_revision") && !body.at("expected_revision").is_null()) {
        expected = static_cast<long>(io::RequireInteger(body, "expected_revision"));
      }
      return Json(ToJson(store_.SubmitEdits(pid, loop, sid, std::move(edits), expected)));
    }
    if (action == "threshold") {
      double threshold;
      if (body.contains("threshold")) {
        threshold = io::RequireNumber(body, "threshold");
      } else {
        const std::string dir = io::RequireString(body, "direction");
        if (dir != "up" && dir != "down") throw ValidationError("direction must be 'up' or 'down'");
        const double step = body.contains("step") ? io::RequireNumber(body, "step") : kDefaultThresholdStep;
        threshold = SteppedThreshold(store_.Annotations(pid, loop, sid).active_threshold,
                                     dir == "up" ? ThresholdDirection::kUp : ThresholdDirection::kDown,
                                     step);
      }
      return Json(ToJson(store_.ApplyThreshold(pid, loop, sid, threshold)));
    }
    if (action == "finalize") return Json(ToJson(store_.Finalize(pid, loop, sid)));
    if (action == "patches") {
      const double padding = body.contains("padding_ratio") ? io::RequireNumber(body, "padding_ratio")
                                                            : slide::kDefaultPaddingRatio;
      return Json(io::ParseJson(slide::WritePatchManifest(store_.ExtractPatches(pid, loop, sid, padding))));
    }
    if (action == "labels") {
      const io::Json& list = io::RequireField(body, "records");
      if (!list.is_array()) throw ValidationError("'records' must be an array");
      std::vector<io::PatchLabelRecord> records;
      for (std::size_t i = 0; i < list.size(); ++i) {
        io::Json item = list[i];
        if (!item.is_object()) throw ValidationError("record must be an object", SourceLocation::Record(static_cast<int>(i)));
        if (!item.contains("slide_id")) item["slide_id"] = sid;
        if (!item.contains("labeled_at")) item["labeled_at"] = Timestamp::Now().ToString();
        if (!item.contains("labeler")) item["labeler"] = "";
        try {
          records.push_back(io::PatchLabelFromJson(item));
        } catch (const ValidationError& e) {
          throw ValidationError(e.message(), SourceLocation::Record(static_cast<int>(i)));
        }
      }
      io::Json out = io::Json::array();
      for (const auto& l : store_.SubmitLabels(pid, loop, sid, std::move(records))) out.push_back(io::ToJson(l));
      return Json({{"records", std::move(out)}});
    }
    NotFound();
  }

  ProjectStore& store_;
  const ApiRequest& r_;
  std::vector<std::string> seg_;
};

}  // namespace

ApiResponse ApiDispatcher::Handle(const ApiRequest& request) const {
  try {
    return Router(store_, request).Route();
  } catch (const RouteError& e) {
    return Json({{"code", "not_found"}, {"message", e.message()}}, e.status);
  } catch (const Error& e) {
    return Json(ErrorBody(e), HttpStatusFor(e.code()));
  } catch (const io::Json::exception& e) {
    return Json({{"code", "validation_error"}, {"message", e.what()}}, 400);
  } catch (const std::exception& e) {
    return Json({{"code", "io_error"}, {"message", e.what()}}, 500);
  }
}

ApiServer::ApiServer(ProjectStore& store)
    : dispatcher_(store), server_(std::make_unique<httplib::Server>()) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest request;
    request.method = req.method;
    request.path = req.path;
    for (const auto& [k, v] : req.params) request.query[k] = v;
    request.body = req.body;
    const ApiResponse response = dispatcher_.Handle(request);
    res.status = response.status;
    res.set_content(response.body, response.content_type);
  };
  server_->Get(R"(/.*)", handler);
  server_->Post(R"(/.*)", handler);
}

ApiServer::~ApiServer() { Stop(); }

int ApiServer::Bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw IoError("cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) throw IoError("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void ApiServer::Run() { server_->listen_after_bind(); }

void ApiServer::Start() {
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void ApiServer::Stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace loopcurate::loop
