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

#include "netbuddy/http_backend.h"

#include <cstdlib>

#include "absl/strings/str_cat.h"
#include "httplib.h"
#include "json.hpp"

namespace netbuddy {
namespace {

using nlohmann::json;

std::string EnvOrEmpty(const char* name) {
  const char* value = std::getenv(name);
  return value == nullptr ? "" : value;
}

// Splits "scheme://host[:port]/path" into the client base and the path.
absl::StatusOr<std::pair<std::string, std::string>> SplitUrl(
    const std::string& url) {
  size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    return absl::InvalidArgumentError(
        absl::StrCat("URL '", url, "' has no scheme"));
  }
  size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return std::pair{url, std::string("/")};
  return std::pair{url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

absl::StatusOr<HttpBackendOptions> HttpBackendOptionsFromEnvironment() {
  HttpBackendOptions options;
  options.url = EnvOrEmpty("NETBUDDY_LLM_URL");
  options.api_key = EnvOrEmpty("NETBUDDY_LLM_KEY");
  options.model = EnvOrEmpty("NETBUDDY_LLM_MODEL");
  if (options.url.empty()) {
    return absl::FailedPreconditionError(
        "NETBUDDY_LLM_URL is not set; the http backend needs an endpoint");
  }
  if (options.model.empty()) {
    return absl::FailedPreconditionError("NETBUDDY_LLM_MODEL is not set");
  }
  return options;
}

std::string BuildChatRequest(const PromptEnvelope& prompt,
                             const std::string& model, double temperature) {
  json messages = json::array();
  messages.push_back({{"role", "system"}, {"content", prompt.system_text}});
  messages.push_back({{"role", "user"}, {"content", prompt.user_text}});
  for (const FeedbackTurn& turn : prompt.feedback) {
    messages.push_back(
        {{"role", "assistant"}, {"content", turn.previous_response}});
    messages.push_back({{"role", "user"}, {"content", turn.message}});
  }
  return json{{"model", model},
              {"temperature", temperature},
              {"messages", messages}}
      .dump();
}

absl::StatusOr<BackendReply> ParseChatResponse(const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    return absl::InternalError(
        absl::StrCat("chat response is not JSON: ", e.what()));
  }
  const json* content = nullptr;
  if (doc.contains("choices") && doc["choices"].is_array() &&
      !doc["choices"].empty()) {
    const json& choice = doc["choices"][0];
    if (choice.contains("message") && choice["message"].contains("content")) {
      content = &choice["message"]["content"];
    }
  }
  if (content == nullptr || !content->is_string()) {
    return absl::InternalError(
        "chat response has no choices[0].message.content string");
  }
  BackendReply reply;
  reply.text = content->get<std::string>();
  if (doc.contains("usage") && doc["usage"].is_object()) {
    const json& usage = doc["usage"];
    if (usage.contains("prompt_tokens") &&
        usage["prompt_tokens"].is_number_integer()) {
      reply.prompt_tokens = usage["prompt_tokens"].get<int64_t>();
    }
    if (usage.contains("completion_tokens") &&
        usage["completion_tokens"].is_number_integer()) {
      reply.completion_tokens = usage["completion_tokens"].get<int64_t>();
    }
  }
  return reply;
}

HttpBackend::HttpBackend(HttpBackendOptions options)
    : options_(std::move(options)) {}

absl::StatusOr<BackendReply> HttpBackend::Complete(
    const PromptEnvelope& prompt, double temperature) {
  auto parts = SplitUrl(options_.url);
  if (!parts.ok()) return parts.status();
  httplib::Client client(parts->first);
  client.set_connection_timeout(options_.timeout_seconds);
  client.set_read_timeout(options_.timeout_seconds);
  httplib::Headers headers;
  if (!options_.api_key.empty()) {
    headers.emplace("Authorization", absl::StrCat("Bearer ", options_.api_key));
  }
  httplib::Result response =
      client.Post(parts->second, headers,
                  BuildChatRequest(prompt, options_.model, temperature),
                  "application/json");
  if (!response) {
    return absl::UnavailableError(absl::StrCat(
        "request to ", options_.url, " failed: ",
        httplib::to_string(response.error())));
  }
  if (response->status != 200) {
    return absl::UnavailableError(absl::StrCat(
        "endpoint answered HTTP ", response->status, ": ",
        response->body.substr(0, 200)));
  }
  return ParseChatResponse(response->body);
}

}  // namespace netbuddy
