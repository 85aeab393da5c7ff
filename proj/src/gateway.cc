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

#include "retta/gateway.h"

#include <algorithm>
#include <sstream>

#include "httplib.h"
#include "retta/serialization.h"

namespace retta::gateway {
namespace {

namespace ser = serialization;

class ApiException : public std::runtime_error {
 public:
  ApiException(ApiCode code, const std::string &message, json detail = nullptr)
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}
  ApiCode code() const { return code_; }
  const json &detail() const { return detail_; }

 private:
  ApiCode code_;
  json detail_;
};

Response ErrorResponse(const ApiError &error) {
  return Response{HttpStatus(error.code), error.ToJson(), {}};
}

json ParseBody(const Request &request) {
  if (request.body.empty()) return json::object();
  try {
    json body = json::parse(request.body);
    if (!body.is_object()) throw ApiException(ApiCode::kValidation, "body must be an object");
    return body;
  } catch (const json::parse_error &e) {
    throw ApiException(ApiCode::kValidation, std::string("malformed JSON body: ") + e.what());
  }
}

std::vector<std::string> SplitPath(std::string_view path) {
  path = path.substr(0, path.find('?'));
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos < path.size()) {
    std::size_t next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    if (next > pos) parts.emplace_back(path.substr(pos, next - pos));
    pos = next + 1;
  }
  return parts;
}

json ServiceList(const std::vector<registry::ServiceDescriptor> &services) {
  json list = json::array();
  for (const auto &service : services) list.push_back(ser::ServiceToJson(service));
  return list;
}

json ProjectView(const pipeline::Project &project) {
  json view = ser::ProjectToJson(project);
  view["has_result"] = project.result.has_value();
  return view;
}

bool Authorized(const Request &request, const std::string &token) {
  auto it = request.headers.find("authorization");
  return it != request.headers.end() && it->second == "Bearer " + token;
}

}  // namespace

std::string_view ApiCodeName(ApiCode code) {
  switch (code) {
    case ApiCode::kValidation: return "validation";
    case ApiCode::kState: return "state";
    case ApiCode::kEligibility: return "eligibility";
    case ApiCode::kSchema: return "schema";
    case ApiCode::kNotFound: return "not_found";
    case ApiCode::kInternal: return "internal";
  }
  return "internal";
}

ApiCode MapError(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kValidation:
    case ErrorCode::kParameter:
    case ErrorCode::kEmptyInput:
    case ErrorCode::kTraining:
      return ApiCode::kValidation;
    case ErrorCode::kState:
      return ApiCode::kState;
    case ErrorCode::kEligibility:
      return ApiCode::kEligibility;
    case ErrorCode::kSchema:
    case ErrorCode::kAvailability:
      return ApiCode::kSchema;
    case ErrorCode::kNotFound:
    case ErrorCode::kLookup:
      return ApiCode::kNotFound;
    case ErrorCode::kIo:
    case ErrorCode::kIntegrity:
    case ErrorCode::kInternal:
      return ApiCode::kInternal;
  }
  return ApiCode::kInternal;
}

int HttpStatus(ApiCode code) {
  switch (code) {
    case ApiCode::kValidation: return 400;
    case ApiCode::kState: return 409;
    case ApiCode::kEligibility: return 409;
    case ApiCode::kSchema: return 422;
    case ApiCode::kNotFound: return 404;
    case ApiCode::kInternal: return 500;
  }
  return 500;
}

json ApiError::ToJson() const {
  json doc = {{"code", ApiCodeName(code)}, {"message", message}};
  if (!detail.is_null()) doc["detail"] = detail;
  return doc;
}

Gateway::Gateway(std::shared_ptr<pipeline::Engine> engine, GatewayOptions options)
    : engine_(std::move(engine)), options_(std::move(options)) {}

Gateway::~Gateway() { WaitForRuns(); }

void Gateway::WaitForRuns() {
  std::vector<Worker> workers;
  {
    std::lock_guard<std::mutex> lock(workers_mutex_);
    workers.swap(workers_);
  }
  for (Worker &worker : workers) worker.thread.join();
}

void Gateway::StartRun(const std::string &id) {
  std::lock_guard<std::mutex> lock(workers_mutex_);
  // Reap finished runs so a long-lived server does not accumulate threads.
  for (auto it = workers_.begin(); it != workers_.end();) {
    if (it->done->load()) {
      it->thread.join();
      it = workers_.erase(it);
    } else {
      ++it;
    }
  }
  auto done = std::make_shared<std::atomic<bool>>(false);
  std::thread thread([engine = engine_, id, done] {
    try {
      engine->Finish(id);
    } catch (const std::exception &) {
      // The project stays Running; ResumeInterrupted can retry it.
    }
    done->store(true);
  });
  workers_.push_back({std::move(thread), std::move(done)});
}

void Gateway::ResumeInterrupted() {
  for (const std::string &id : engine_->store().List()) {
    try {
      if (engine_->Get(id).state == pipeline::ProjectState::kRunning) StartRun(id);
    } catch (const Error &) {
      // Unreadable projects are reported when requested.
    }
  }
}

Response Gateway::Handle(const Request &request) {
  Response response;
  if (request.method == "OPTIONS" && options_.cors_origin) {
    response.status = 204;
  } else if (options_.bearer_token && !Authorized(request, *options_.bearer_token)) {
    response = ErrorResponse({ApiCode::kValidation, "missing or invalid bearer token", nullptr});
    response.status = 401;
    response.headers["WWW-Authenticate"] = "Bearer";
  } else {
    try {
      response = Route(request);
    } catch (const ApiException &e) {
      response = ErrorResponse({e.code(), e.what(), e.detail()});
    } catch (const Error &e) {
      response = ErrorResponse(
          {MapError(e.code()), e.what(), json{{"error", ErrorCodeName(e.code())}}});
    } catch (const std::exception &e) {
      response = ErrorResponse({ApiCode::kInternal, e.what(), nullptr});
    }
  }
  if (options_.cors_origin) {
    response.headers["Access-Control-Allow-Origin"] = *options_.cors_origin;
    response.headers["Access-Control-Allow-Methods"] = "GET, POST, OPTIONS";
    response.headers["Access-Control-Allow-Headers"] = "Authorization, Content-Type";
  }
  return response;
}

Response Gateway::Route(const Request &request) {
  const std::vector<std::string> parts = SplitPath(request.path);
  const std::string &method = request.method;
  auto unknown = [&]() -> Response {
    throw ApiException(ApiCode::kNotFound, "unknown route " + method + " " + request.path);
  };
  if (parts.empty() || parts[0] != "projects" || parts.size() > 3) return unknown();

  if (parts.size() == 1) {
    if (method != "POST") return unknown();
    json body = ParseBody(request);
    if (!body.contains("region")) throw ApiException(ApiCode::kValidation, "region is required");
    pipeline::Project project = engine_->Create(ser::RegionFromJson(body["region"]));
    return {201,
            {{"project", ProjectView(project)},
             {"eligible_services", ServiceList(engine_->EligibleServices(project))}},
            {}};
  }

  const std::string &id = parts[1];
  if (parts.size() == 2) {
    if (method != "GET") return unknown();
    pipeline::Project project = engine_->Get(id);
    return {200, {{"project", ProjectView(project)}}, {}};
  }

  const std::string &action = parts[2];
  if (action == "service" && method == "POST") {
    json body = ParseBody(request);
    if (!body.contains("service_id") || !body["service_id"].is_string()) {
      throw ApiException(ApiCode::kValidation, "service_id is required");
    }
    std::string name = body["service_id"].get<std::string>();
    auto service = registry::ParseServiceId(name);
    if (!service) throw ApiException(ApiCode::kValidation, "unknown service \"" + name + "\"");
    return {200, {{"project", ProjectView(engine_->SelectService(id, *service))}}, {}};
  }
  if (action == "sources" && method == "GET") {
    pipeline::Project project = engine_->Get(id);
    if (!project.service_id) {
      throw ApiException(ApiCode::kState, "select a service first",
                         json{{"state", pipeline::StateName(project.state)}});
    }
    const auto &catalog = engine_->resources().catalog;
    json sources = json::array();
    for (const auto &source :
         registry::AvailableSources(catalog, project.region,
                                    catalog.service(*project.service_id),
                                    engine_->SourceCounts())) {
      sources.push_back(ser::SourceToJson(source));
    }
    return {200, {{"service_id", registry::ServiceIdName(*project.service_id)},
                  {"sources", sources}}, {}};
  }
  if (action == "context" && method == "POST") {
    json body = ParseBody(request);
    if (!body.contains("sources") || !body["sources"].is_array()) {
      throw ApiException(ApiCode::kValidation, "sources list is required");
    }
    std::vector<corpus::SourceKind> sources;
    for (const json &name : body["sources"]) {
      auto kind = name.is_string() ? corpus::ParseSourceKind(name.get<std::string>())
                                   : std::nullopt;
      if (!kind) throw ApiException(ApiCode::kValidation, "unknown source " + name.dump());
      sources.push_back(*kind);
    }
    std::map<corpus::SourceKind, corpus::ContextSpec> contexts;
    if (body.contains("context")) {
      if (!body["context"].is_object()) {
        throw ApiException(ApiCode::kValidation, "context must map sources to specs");
      }
      for (const auto &[name, spec] : body["context"].items()) {
        auto kind = corpus::ParseSourceKind(name);
        if (!kind) throw ApiException(ApiCode::kValidation, "unknown source \"" + name + "\"");
        try {
          contexts[*kind] = ser::ContextFromJson(spec);
        } catch (const Error &e) {
          throw ApiException(ApiCode::kSchema, e.what(), json{{"source", name}});
        }
      }
    }
    return {200, {{"project", ProjectView(engine_->SetSourcesAndContext(id, sources, contexts))}},
            {}};
  }
  if (action == "run" && method == "POST") {
    json body = ParseBody(request);
    if (body.contains("reset") && !body["reset"].is_boolean()) {
      throw ApiException(ApiCode::kValidation, "reset must be a boolean");
    }
    bool reset = body.value("reset", false);
    pipeline::Project project = engine_->Begin(id, reset);
    StartRun(project.id);
    return {202, {{"status", "started"}, {"project", ProjectView(project)}}, {}};
  }
  if (action == "result" && method == "GET") {
    pipeline::Project project = engine_->Get(id);
    if (!project.result) {
      json detail = {{"state", pipeline::StateName(project.state)}};
      if (project.failure_reason) detail["failure_reason"] = *project.failure_reason;
      throw ApiException(ApiCode::kState, "project has no result", detail);
    }
    json result = ser::ResultToJson(*project.result);
    result["timings"] = ser::TimingsToJson(project.result->timings);
    return {200, {{"project_id", project.id}, {"result", result}}, {}};
  }
  return unknown();
}

struct HttpServer::Impl {
  Gateway &gateway;
  httplib::Server server;

  explicit Impl(Gateway &g) : gateway(g) {
    auto handler = [this](const httplib::Request &req, httplib::Response &res) {
      Request request;
      request.method = req.method;
      request.path = req.path;
      request.body = req.body;
      for (const auto &[name, value] : req.headers) {
        std::string lower = name;
        std::transform(lower.begin(), lower.end(), lower.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        request.headers[lower] = value;
      }
      Response response = gateway.Handle(request);
      res.status = response.status;
      for (const auto &[name, value] : response.headers) res.set_header(name, value);
      if (response.status != 204) {
        res.set_content(response.body.dump(), "application/json; charset=utf-8");
      }
    };
    server.Get(".*", handler);
    server.Post(".*", handler);
    server.Put(".*", handler);
    server.Delete(".*", handler);
    server.Patch(".*", handler);
    server.Options(".*", handler);
  }
};

HttpServer::HttpServer(Gateway &gateway) : impl_(std::make_unique<Impl>(gateway)) {}

HttpServer::~HttpServer() { Stop(); }

bool HttpServer::Listen(const std::string &host, int port) {
  return impl_->server.listen(host, port);
}

int HttpServer::BindToAnyPort(const std::string &host) {
  return impl_->server.bind_to_any_port(host);
}

bool HttpServer::ListenAfterBind() { return impl_->server.listen_after_bind(); }

void HttpServer::Stop() { impl_->server.stop(); }

}  // namespace retta::gateway
