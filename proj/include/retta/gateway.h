// Copyright 2026 The RETTA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RETTA_GATEWAY_H_
#define RETTA_GATEWAY_H_

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"
#include "retta/error.h"
#include "retta/pipeline.h"

namespace retta::gateway {

using nlohmann::json;

enum class ApiCode { kValidation, kState, kEligibility, kSchema, kNotFound, kInternal };

std::string_view ApiCodeName(ApiCode code);
ApiCode MapError(ErrorCode code);
int HttpStatus(ApiCode code);

struct ApiError {
  ApiCode code = ApiCode::kInternal;
  std::string message;
  json detail;  // null when absent

  json ToJson() const;
};

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> headers;  // lower-case names
  std::string body;
};

struct Response {
  int status = 200;
  json body;
  std::map<std::string, std::string> headers;
};

struct GatewayOptions {
  // Required as "Authorization: Bearer <token>" when set.
  std::optional<std::string> bearer_token;
  // Origin allowed by CORS headers, e.g. "http://localhost:5173" or "*".
  std::optional<std::string> cors_origin;
};

// Routes:
//   POST /projects                 201 project + eligible services
//   GET  /projects/{id}            200 project
//   POST /projects/{id}/service    200 | 409 eligibility
//   GET  /projects/{id}/sources    200 sources with context schemas
//   POST /projects/{id}/context    200 | 422 schema
//   POST /projects/{id}/run        202, run continues on a worker thread
//   GET  /projects/{id}/result     200 result | 409 not complete
class Gateway {
 public:
  Gateway(std::shared_ptr<pipeline::Engine> engine, GatewayOptions options = {});
  ~Gateway();

  Gateway(const Gateway &) = delete;
  Gateway &operator=(const Gateway &) = delete;

  Response Handle(const Request &request);

  // Restarts runs of projects left Running by a previous process.
  void ResumeInterrupted();
  // Blocks until every started run has finished.
  void WaitForRuns();

  const GatewayOptions &options() const { return options_; }

 private:
  Response Route(const Request &request);
  void StartRun(const std::string &id);

  std::shared_ptr<pipeline::Engine> engine_;
  GatewayOptions options_;
  struct Worker {
    std::thread thread;
    std::shared_ptr<std::atomic<bool>> done;
  };

  std::mutex workers_mutex_;
  std::vector<Worker> workers_;
};

// HTTP front end for a Gateway.
class HttpServer {
 public:
  explicit HttpServer(Gateway &gateway);
  ~HttpServer();

  // Both block until Stop().
  bool Listen(const std::string &host, int port);
  // Binds an ephemeral port and returns it, or -1.
  int BindToAnyPort(const std::string &host);
  bool ListenAfterBind();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace retta::gateway

#endif  // RETTA_GATEWAY_H_
