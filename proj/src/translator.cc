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

#include "netbuddy/translator.h"

#include <algorithm>
#include <atomic>
#include <thread>

#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"
#include "json.hpp"
#include "netbuddy/verifier.h"

namespace netbuddy {
namespace {

using nlohmann::json;

constexpr absl::string_view kComponentsHeader = "Network components:";
constexpr absl::string_view kBatchHeader = "Requirements to translate:";

constexpr absl::string_view kFormatDescription =
    R"(Output format: a JSON object {"assertions": [...]}. Each assertion is an object with
  "req":  the number of the requirement it was derived from,
  "kind": "reach", "noreach", "waypoint" or "avoid",
  "from": the switch the traffic starts at,
  "to":   the destination host,
  "via":  for "waypoint", the ordered switches the traffic must traverse;
          for "avoid", the switches the traffic must never traverse;
          omitted for "reach" and "noreach".
A requirement may yield several assertions. Translate every requirement.

Example (switches s1, s2, s3, s4; hosts h1, h2).
Example requirements:
1. All the switches can reach all the destination hosts.
2. Traffic from s1 to h1 should travel across s2.
3. To reach h2, s4 needs to avoid s3.
Example answer:
<SPEC>{"assertions": [
 {"req": 1, "kind": "reach", "from": "s1", "to": "h1"},
 {"req": 1, "kind": "reach", "from": "s1", "to": "h2"},
 {"req": 1, "kind": "reach", "from": "s2", "to": "h1"},
 {"req": 1, "kind": "reach", "from": "s2", "to": "h2"},
 {"req": 1, "kind": "reach", "from": "s3", "to": "h1"},
 {"req": 1, "kind": "reach", "from": "s3", "to": "h2"},
 {"req": 1, "kind": "reach", "from": "s4", "to": "h1"},
 {"req": 1, "kind": "reach", "from": "s4", "to": "h2"},
 {"req": 2, "kind": "waypoint", "from": "s1", "to": "h1", "via": ["s2"]},
 {"req": 3, "kind": "avoid", "from": "s4", "to": "h2", "via": ["s3"]}
]}</SPEC>
)";

std::string OpenTag(absl::string_view tag) { return absl::StrCat("<", tag, ">"); }
std::string CloseTag(absl::string_view tag) {
  return absl::StrCat("</", tag, ">");
}

std::string TagPair(absl::string_view tag) {
  return absl::StrCat(OpenTag(tag), " and ", CloseTag(tag));
}

absl::string_view StripCodeFence(absl::string_view text) {
  text = absl::StripAsciiWhitespace(text);
  if (absl::ConsumePrefix(&text, "```")) {
    absl::ConsumePrefix(&text, "json");
    absl::ConsumeSuffix(&text, "```");
  }
  return absl::StripAsciiWhitespace(text);
}

}  // namespace

absl::Status ValidateTranslatorConfig(const TranslatorConfig& config) {
  if (config.batch_size < 1) {
    return absl::InvalidArgumentError("batch size must be at least 1");
  }
  if (config.temperature < 0.0 || config.temperature > 1.0) {
    return absl::InvalidArgumentError("temperature must lie in [0, 1]");
  }
  if (config.max_input_tokens < 1) {
    return absl::InvalidArgumentError("max input tokens must be positive");
  }
  if (config.max_retries < 0) {
    return absl::InvalidArgumentError("max retries must not be negative");
  }
  if (config.max_in_flight < 1) {
    return absl::InvalidArgumentError("max in-flight must be at least 1");
  }
  if (config.price.prompt_per_1k < 0 || config.price.completion_per_1k < 0) {
    return absl::InvalidArgumentError("prices must not be negative");
  }
  return absl::OkStatus();
}

int64_t EstimateTokens(absl::string_view text) {
  return (static_cast<int64_t>(text.size()) + 3) / 4;
}

int64_t EstimatePromptTokens(const PromptEnvelope& prompt) {
  int64_t total = EstimateTokens(prompt.system_text) +
                  EstimateTokens(prompt.user_text);
  for (const FeedbackTurn& turn : prompt.feedback) {
    total += EstimateTokens(turn.previous_response) +
             EstimateTokens(turn.message);
  }
  return total;
}

PromptEnvelope BuildPrompt(const std::vector<std::string>& batch,
                           const NetworkComponents& components) {
  PromptEnvelope prompt;
  prompt.expected_tag = std::string(kSpecTag);
  prompt.system_text = absl::StrCat(
      "You are an API server that converts network requirements into a "
      "formal specification.\n"
      "Reply with a single JSON object wrapped in ",
      TagPair(kSpecTag), ". Do not add explanations.\n", kComponentsHeader,
      "\nSwitches: ", absl::StrJoin(components.switches, ", "),
      "\nHosts: ", absl::StrJoin(components.hosts, ", "), "\n");
  std::string user(kFormatDescription);
  absl::StrAppend(&user, "\n", kBatchHeader, "\n");
  for (size_t i = 0; i < batch.size(); ++i) {
    absl::StrAppend(&user, i + 1, ". ", batch[i], "\n");
  }
  prompt.user_text = std::move(user);
  return prompt;
}

std::vector<std::string> BatchRequirements(const PromptEnvelope& prompt) {
  std::vector<std::string> out;
  size_t pos = absl::string_view(prompt.user_text).rfind(kBatchHeader);
  if (pos == std::string::npos) return out;
  absl::string_view rest =
      absl::string_view(prompt.user_text).substr(pos + kBatchHeader.size());
  for (absl::string_view line : absl::StrSplit(rest, '\n', absl::SkipEmpty())) {
    size_t dot = line.find(". ");
    int index = 0;
    if (dot == absl::string_view::npos ||
        !absl::SimpleAtoi(line.substr(0, dot), &index)) {
      continue;
    }
    out.emplace_back(line.substr(dot + 2));
  }
  return out;
}

NetworkComponents PromptComponents(const PromptEnvelope& prompt) {
  NetworkComponents components;
  size_t pos = absl::string_view(prompt.system_text).find(kComponentsHeader);
  if (pos == std::string::npos) return components;
  absl::string_view rest = absl::string_view(prompt.system_text).substr(pos);
  for (absl::string_view line : absl::StrSplit(rest, '\n')) {
    std::vector<NodeId>* target = nullptr;
    if (absl::ConsumePrefix(&line, "Switches:")) {
      target = &components.switches;
    } else if (absl::ConsumePrefix(&line, "Hosts:")) {
      target = &components.hosts;
    } else {
      continue;
    }
    for (absl::string_view id :
         absl::StrSplit(line, absl::ByAnyChar(", "), absl::SkipEmpty())) {
      target->emplace_back(id);
    }
  }
  return components;
}

absl::StatusOr<std::vector<RequirementAssertion>> ExtractTaggedJson(
    absl::string_view response, absl::string_view expected_tag,
    std::optional<int> expected_requirements) {
  const std::string open = OpenTag(expected_tag);
  const std::string close = CloseTag(expected_tag);
  size_t begin = response.find(open);
  if (begin == absl::string_view::npos) {
    return absl::NotFoundError(absl::StrCat(
        "no ", open, " tag found; the answer must be wrapped in ",
        TagPair(expected_tag)));
  }
  begin += open.size();
  size_t end = response.find(close, begin);
  if (end == absl::string_view::npos) {
    return absl::DataLossError(absl::StrCat(
        "the answer stops before ", close,
        "; it looks truncated. Send the complete JSON wrapped in ",
        TagPair(expected_tag)));
  }
  absl::string_view payload = StripCodeFence(response.substr(begin, end - begin));

  json doc;
  try {
    doc = json::parse(payload);
  } catch (const json::parse_error& e) {
    return absl::InvalidArgumentError(absl::StrCat(
        "the JSON inside ", TagPair(expected_tag), " is malformed: ", e.what()));
  }
  auto schema_error = [&](std::string detail) {
    return absl::FailedPreconditionError(absl::StrCat(
        "the JSON inside ", TagPair(expected_tag),
        " does not follow the assertion schema: ", detail));
  };
  const json* items = &doc;
  if (doc.is_object()) {
    if (!doc.contains("assertions")) {
      return schema_error("missing field \"assertions\"");
    }
    items = &doc["assertions"];
  }
  if (!items->is_array()) {
    return schema_error("\"assertions\" must be an array");
  }

  std::vector<RequirementAssertion> out;
  std::vector<bool> covered(expected_requirements.value_or(0) + 1, false);
  for (size_t i = 0; i < items->size(); ++i) {
    const json& item = (*items)[i];
    const std::string where = absl::StrCat("assertion ", i + 1);
    if (!item.is_object()) return schema_error(where + " is not an object");
    for (const char* field : {"kind", "from", "to"}) {
      if (!item.contains(field) || !item[field].is_string()) {
        return schema_error(
            absl::StrCat(where, " needs a string field \"", field, "\""));
      }
    }
    absl::StatusOr<AssertionKind> kind =
        ParseAssertionKind(item["kind"].get<std::string>());
    if (!kind.ok()) {
      return schema_error(absl::StrCat(where, ": ", kind.status().message()));
    }
    RequirementAssertion a;
    a.kind = *kind;
    a.from = item["from"].get<std::string>();
    a.to = item["to"].get<std::string>();
    if (item.contains("via")) {
      if (!item["via"].is_array()) {
        return schema_error(where + ": \"via\" must be an array");
      }
      for (const json& v : item["via"]) {
        if (!v.is_string()) {
          return schema_error(where + ": \"via\" must hold switch names");
        }
        a.via.push_back(v.get<std::string>());
      }
    }
    if (item.contains("req")) {
      if (!item["req"].is_number_integer()) {
        return schema_error(where + ": \"req\" must be an integer");
      }
      const int req = item["req"].get<int>();
      if (expected_requirements.has_value() &&
          (req < 1 || req > *expected_requirements)) {
        return schema_error(absl::StrCat(where, " refers to requirement ", req,
                                         " but the batch has ",
                                         *expected_requirements));
      }
      if (expected_requirements.has_value()) covered[req] = true;
      a.origin = absl::StrCat("#", req);
    }
    if (absl::Status s = ValidateAssertion(a); !s.ok()) {
      return schema_error(absl::StrCat(where, ": ", s.message()));
    }
    out.push_back(std::move(a));
  }
  if (expected_requirements.has_value()) {
    std::vector<std::string> missing;
    for (int k = 1; k <= *expected_requirements; ++k) {
      if (!covered[k]) missing.push_back(absl::StrCat(k));
    }
    if (!missing.empty()) {
      return schema_error(absl::StrCat("requirement(s) ",
                                       absl::StrJoin(missing, ", "),
                                       " were not translated"));
    }
  }
  return out;
}

std::string AssertionsToJson(const std::vector<RequirementAssertion>& assertions,
                             const std::vector<int>& requirement_index) {
  json items = json::array();
  for (size_t i = 0; i < assertions.size(); ++i) {
    const RequirementAssertion& a = assertions[i];
    json item = {{"kind", AssertionKindName(a.kind)},
                 {"from", a.from},
                 {"to", a.to}};
    if (!a.via.empty()) item["via"] = a.via;
    if (i < requirement_index.size()) item["req"] = requirement_index[i];
    items.push_back(std::move(item));
  }
  return json{{"assertions", items}}.dump();
}

std::string SerializeCost(const TranslationResult& result) {
  json failures = json::array();
  for (const BatchFailure& f : result.failures) {
    failures.push_back({{"batch", f.batch_index}, {"reason", f.reason}});
  }
  json doc = {{"prompt_tokens", result.cost.prompt_tokens},
              {"completion_tokens", result.cost.completion_tokens},
              {"messages_sent", result.cost.messages_sent},
              {"retries_used", result.cost.retries_used},
              {"estimated_price", result.cost.estimated_price},
              {"batches", result.batch_count},
              {"failures", failures}};
  return doc.dump(2) + "\n";
}

namespace {

struct BatchOutcome {
  std::vector<RequirementAssertion> assertions;
  TranslationCost cost;
  std::optional<std::string> failure;
};

BatchOutcome TranslateBatch(const std::vector<std::string>& batch,
                            int first_requirement,
                            const TranslatorConfig& config,
                            LlmBackend& backend,
                            const NetworkComponents& components) {
  BatchOutcome outcome;
  PromptEnvelope prompt = BuildPrompt(batch, components);
  const int64_t input_tokens = EstimatePromptTokens(prompt);
  if (input_tokens > config.max_input_tokens) {
    outcome.failure = absl::StrCat(
        batch.size(), " requirements exceed the input token limit (",
        input_tokens, " > ", config.max_input_tokens, " tokens); skipped");
    return outcome;
  }
  for (int attempt = 0;; ++attempt) {
    absl::StatusOr<BackendReply> reply =
        backend.Complete(prompt, config.temperature);
    ++outcome.cost.messages_sent;
    if (!reply.ok()) {
      outcome.cost.prompt_tokens += EstimatePromptTokens(prompt);
      outcome.failure =
          absl::StrCat("backend error: ", reply.status().ToString());
      return outcome;
    }
    outcome.cost.prompt_tokens +=
        reply->prompt_tokens.value_or(EstimatePromptTokens(prompt));
    outcome.cost.completion_tokens +=
        reply->completion_tokens.value_or(EstimateTokens(reply->text));

    absl::StatusOr<std::vector<RequirementAssertion>> parsed =
        ExtractTaggedJson(reply->text, prompt.expected_tag,
                          static_cast<int>(batch.size()));
    if (parsed.ok()) {
      std::vector<std::pair<int, RequirementAssertion>> ordered;
      for (RequirementAssertion& a : *parsed) {
        int local = 0;
        const bool indexed =
            absl::SimpleAtoi(absl::StripPrefix(a.origin, "#"), &local);
        const int global = indexed ? first_requirement + local - 1 : 0;
        a.origin = indexed ? absl::StrCat("requirement ", global)
                           : absl::StrCat("requirements ", first_requirement,
                                          "-",
                                          first_requirement + batch.size() - 1);
        ordered.emplace_back(indexed ? global : first_requirement, std::move(a));
      }
      std::stable_sort(ordered.begin(), ordered.end(),
                       [](const auto& x, const auto& y) {
                         return x.first < y.first;
                       });
      for (auto& [index, a] : ordered) outcome.assertions.push_back(std::move(a));
      return outcome;
    }
    if (attempt >= config.max_retries) {
      outcome.failure = absl::StrCat("no usable answer after ", attempt,
                                     " retries: ", parsed.status().message());
      return outcome;
    }
    ++outcome.cost.retries_used;
    prompt.feedback.push_back(
        {reply->text, FeedbackMessage(parsed.status(), prompt.expected_tag)});
  }
}

}  // namespace

absl::StatusOr<TranslationResult> TranslateRequirements(
    const std::vector<std::string>& requirements,
    const TranslatorConfig& config, LlmBackend& backend,
    const NetworkComponents& components) {
  if (requirements.empty()) {
    return absl::InvalidArgumentError("no requirements");
  }
  if (absl::Status s = ValidateTranslatorConfig(config); !s.ok()) return s;

  std::vector<std::vector<std::string>> batches;
  for (size_t i = 0; i < requirements.size(); i += config.batch_size) {
    size_t end = std::min(requirements.size(), i + config.batch_size);
    batches.emplace_back(requirements.begin() + i, requirements.begin() + end);
  }

  std::vector<BatchOutcome> outcomes(batches.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < batches.size(); i = next++) {
      outcomes[i] =
          TranslateBatch(batches[i], static_cast<int>(i) * config.batch_size + 1,
                         config, backend, components);
    }
  };
  const size_t workers =
      backend.SupportsConcurrentCalls()
          ? std::min<size_t>(config.max_in_flight, batches.size())
          : 1;
  std::vector<std::thread> pool;
  for (size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  TranslationResult result;
  result.batch_count = static_cast<int>(batches.size());
  for (size_t i = 0; i < outcomes.size(); ++i) {
    BatchOutcome& o = outcomes[i];
    result.cost.prompt_tokens += o.cost.prompt_tokens;
    result.cost.completion_tokens += o.cost.completion_tokens;
    result.cost.messages_sent += o.cost.messages_sent;
    result.cost.retries_used += o.cost.retries_used;
    if (o.failure.has_value()) {
      result.failures.push_back({static_cast<int>(i), *o.failure});
    }
    for (RequirementAssertion& a : o.assertions) {
      result.assertions.push_back(std::move(a));
    }
  }
  result.cost.estimated_price =
      result.cost.prompt_tokens / 1000.0 * config.price.prompt_per_1k +
      result.cost.completion_tokens / 1000.0 * config.price.completion_per_1k;
  return result;
}

}  // namespace netbuddy
