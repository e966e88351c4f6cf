// Copyright 2026 The Nestrec Authors.
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

#include "nestrec/review_http.h"

#include <charconv>

#include "httplib.h"
#include "json.hpp"
#include "nestrec/errors.h"

namespace nestrec {

using json = nlohmann::json;

namespace {

constexpr const char *kJson = "application/json";

void SendError(httplib::Response &res, int status, const std::string &message) {
  res.status = status;
  res.set_content(json{{"error", message}}.dump(), kJson);
}

void Queue(const ReviewService &service, const httplib::Request &req,
           httplib::Response &res) {
  size_t limit = 0;
  if (req.has_param("limit")) {
    std::string v = req.get_param_value("limit");
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), limit);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
      SendError(res, 400, "limit must be a non-negative integer");
      return;
    }
  }
  std::string body = "{\"items\":[";
  bool first = true;
  for (const ReviewItem &item : service.Queue(limit)) {
    if (!first) body += ',';
    first = false;
    body += item.ToJson();
  }
  body += "]}";
  res.set_content(body, kJson);
}

void Decision(ReviewService &service, const httplib::Request &req,
              httplib::Response &res) {
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    SendError(res, 400, "body must be a JSON object");
    return;
  }
  DecisionRequest d;
  try {
    d.item_id = j.at("item_id").get<std::string>();
    d.action = j.at("action").get<std::string>();
    if (j.contains("article") && !j["article"].is_null()) {
      d.article = j["article"].get<std::string>();
    }
    if (j.contains("annotator")) d.annotator = j["annotator"].get<std::string>();
  } catch (const json::exception &) {
    SendError(res, 400, "item_id and action are required strings");
    return;
  }
  DecisionResult r;
  try {
    r = service.Decide(d);
  } catch (const IoError &e) {
    SendError(res, 500, e.what());
    return;
  }
  if (r.status != 200) {
    SendError(res, r.status, r.error);
    return;
  }
  res.set_content(r.item->ToJson(), kJson);
}

}  // namespace

struct ReviewHttpServer::Impl {
  explicit Impl(ReviewService &s) : service(s) {}
  ReviewService &service;
  httplib::Server server;
};

ReviewHttpServer::ReviewHttpServer(ReviewService &service)
    : impl_(std::make_unique<Impl>(service)) {
  httplib::Server &s = impl_->server;
  ReviewService &svc = impl_->service;
  // Without SO_REUSEPORT so that a port already in use fails to bind.
  s.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                         {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                         {"Access-Control-Allow-Headers", "Content-Type"}});
  s.Options(".*", [](const httplib::Request &, httplib::Response &res) {
    res.status = 204;
  });
  s.Get("/health", [](const httplib::Request &, httplib::Response &res) {
    res.set_content("{\"status\":\"ok\"}", kJson);
  });
  s.Get("/queue", [&svc](const httplib::Request &req, httplib::Response &res) {
    Queue(svc, req, res);
  });
  s.Get(R"(/items/([^/]+))",
        [&svc](const httplib::Request &req, httplib::Response &res) {
          std::optional<ReviewItem> item = svc.Item(req.matches[1]);
          if (!item) {
            SendError(res, 404, "unknown item");
            return;
          }
          res.set_content(item->ToJson(), kJson);
        });
  s.Post("/decision",
         [&svc](const httplib::Request &req, httplib::Response &res) {
           Decision(svc, req, res);
         });
  s.Get("/stats", [&svc](const httplib::Request &, httplib::Response &res) {
    res.set_content(svc.Stats().ToJson(), kJson);
  });
  s.Get("/export", [&svc](const httplib::Request &, httplib::Response &res) {
    res.set_content(svc.Export(), "text/plain; charset=utf-8");
  });
}

ReviewHttpServer::~ReviewHttpServer() { Stop(); }

int ReviewHttpServer::Bind(const std::string &host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool ReviewHttpServer::Listen() { return impl_->server.listen_after_bind(); }

void ReviewHttpServer::Stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void ReviewHttpServer::WaitUntilReady() const {
  impl_->server.wait_until_ready();
}

}  // namespace nestrec
