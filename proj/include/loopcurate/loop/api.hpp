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

#include <map>
#include <memory>
#include <string>
#include <thread>

#include "loopcurate/core/error.hpp"
#include "loopcurate/io/json_codec.hpp"
#include "loopcurate/loop/store.hpp"

namespace httplib {
class Server;
}

namespace loopcurate::loop {

struct ApiRequest {
  std::string method;  // GET or POST
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// 400 domain/parse/validation/format, 404 not_found, 409 conflict,
// 422 precondition_failed, 502 detector_error, 500 io_error.
int HttpStatusFor(ErrorCode code);

// {"code", "message", "location"?}
io::Json ErrorBody(const Error& error);

// Routes HTTP requests onto a ProjectStore. Slide routes act on the latest
// loop unless a "loop" query parameter (or body field for POST) names one.
//
//   GET  /projects
//   POST /projects                                  {name, class_config | class_config_text}
//   GET  /projects/{id}
//   GET  /projects/{id}/slides
//   POST /projects/{id}/slides                      {path}
//   POST /projects/{id}/loops                       {detector?, slides?}
//   GET  /projects/{id}/loops/{n}
//   POST /projects/{id}/loops/{n}/export
//   POST /projects/{id}/loops/{n}/evaluate          {holdout, geometry_mode?}
//   GET  /projects/{id}/slides/{sid}/annotations?threshold=t
//   POST /projects/{id}/slides/{sid}/edits          {edits, expected_revision?}
//   POST /projects/{id}/slides/{sid}/threshold      {threshold} | {direction, step?}
//   POST /projects/{id}/slides/{sid}/finalize
//   GET  /projects/{id}/slides/{sid}/region?level&x&y&w&h   -> image/png
//   POST /projects/{id}/slides/{sid}/patches        {padding_ratio?}
//   GET  /projects/{id}/slides/{sid}/patches
//   GET  /projects/{id}/slides/{sid}/patches/{file}          -> image/png
//   GET  /projects/{id}/slides/{sid}/labels
//   POST /projects/{id}/slides/{sid}/labels         {records}
//   POST /projects/{id}/timing                      TimingSample
//   GET  /projects/{id}/stats
class ApiDispatcher {
 public:
  explicit ApiDispatcher(ProjectStore& store) : store_(store) {}
  ApiResponse Handle(const ApiRequest& request) const;

 private:
  ProjectStore& store_;
};

// HTTP front end over ApiDispatcher.
class ApiServer {
 public:
  explicit ApiServer(ProjectStore& store);
  ~ApiServer();

  // Binds and returns the port; port 0 picks a free one.
  int Bind(const std::string& host, int port);
  // Serves on the calling thread until Stop().
  void Run();
  // Serves on a background thread.
  void Start();
  void Stop();

 private:
  ApiDispatcher dispatcher_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace loopcurate::loop
