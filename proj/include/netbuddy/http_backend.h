// Copyright 2026 The NetBuddy Authors
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

#ifndef NETBUDDY_HTTP_BACKEND_H_
#define NETBUDDY_HTTP_BACKEND_H_

#include <string>

#include "absl/status/statusor.h"
#include "netbuddy/translator.h"

namespace netbuddy {

struct HttpBackendOptions {
  // Full endpoint, e.g. https://api.example.com/v1/chat/completions.
  std::string url;
  std::string api_key;
  std::string model;
  int timeout_seconds = 120;
};

// Reads NETBUDDY_LLM_URL, NETBUDDY_LLM_KEY and NETBUDDY_LLM_MODEL.
absl::StatusOr<HttpBackendOptions> HttpBackendOptionsFromEnvironment();

// Request body sent for `prompt`:
//   {"model", "temperature", "messages": [{"role", "content"}, ...]}
// Feedback turns follow as assistant/user message pairs.
std::string BuildChatRequest(const PromptEnvelope& prompt,
                             const std::string& model, double temperature);

// Pulls choices[0].message.content and optional usage counts out of a
// chat-completion response body.
absl::StatusOr<BackendReply> ParseChatResponse(const std::string& body);

// Generic chat-completion JSON endpoint over HTTP(S).
class HttpBackend : public LlmBackend {
 public:
  explicit HttpBackend(HttpBackendOptions options);

  absl::StatusOr<BackendReply> Complete(const PromptEnvelope& prompt,
                                        double temperature) override;

 private:
  HttpBackendOptions options_;
};

}  // namespace netbuddy

#endif  // NETBUDDY_HTTP_BACKEND_H_
