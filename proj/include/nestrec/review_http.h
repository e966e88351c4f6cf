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

// JSON over HTTP for a ReviewService.
//
//   GET  /health             {"status":"ok"}
//   GET  /queue?limit=N      {"items":[...]} pending items in corpus order
//   GET  /items/{id}         one item
//   POST /decision           {"item_id","action","article"?,"annotator"?}
//   GET  /stats              counts, coverage and suggestion levels
//   GET  /export             CoNLL-U with resolved identities
//
// Errors are {"error": "..."} with status 400, 404, 409 or 422.

#ifndef NESTREC_REVIEW_HTTP_H_
#define NESTREC_REVIEW_HTTP_H_

#include <memory>
#include <string>

#include "nestrec/review_service.h"

namespace nestrec {

class ReviewHttpServer {
 public:
  explicit ReviewHttpServer(ReviewService &service);
  ~ReviewHttpServer();

  // Binds to `port`, or to a free port when `port` is 0. Returns the bound
  // port, or -1 on failure.
  int Bind(const std::string &host, int port);
  // Serves until Stop(). Returns false if the server failed.
  bool Listen();
  void Stop();
  void WaitUntilReady() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace nestrec

#endif  // NESTREC_REVIEW_HTTP_H_
