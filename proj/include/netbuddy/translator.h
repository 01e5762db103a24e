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

// Natural-language requirements to signed assertions through a language
// model backend. Requirements are sent in batches; each answer must carry a
// JSON object inside <SPEC>...</SPEC>. Answers that fail to parse are
// re-prompted with the error appended, up to a fixed retry budget.

#ifndef NETBUDDY_TRANSLATOR_H_
#define NETBUDDY_TRANSLATOR_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "netbuddy/formal_spec.h"
#include "netbuddy/requirement_text.h"

namespace netbuddy {

inline constexpr absl::string_view kSpecTag = "SPEC";

enum class BackendKind { kMock, kHttp };

// Dollars per 1000 tokens. Zero unless configured.
struct PriceModel {
  double prompt_per_1k = 0.0;
  double completion_per_1k = 0.0;
};

struct TranslatorConfig {
  int batch_size = 10;
  double temperature = 0.0;
  int max_input_tokens = 8192;
  int max_retries = 3;
  BackendKind backend = BackendKind::kMock;
  // Batches dispatched concurrently.
  int max_in_flight = 4;
  PriceModel price;
};

absl::Status ValidateTranslatorConfig(const TranslatorConfig& config);

// A previous answer and the error text sent back about it.
struct FeedbackTurn {
  std::string previous_response;
  std::string message;
};

struct PromptEnvelope {
  // Role instructions and the network components.
  std::string system_text;
  // The output format description and the batch of requirements only.
  std::string user_text;
  std::string expected_tag;
  std::vector<FeedbackTurn> feedback;
};

struct BackendReply {
  std::string text;
  // Usage reported by the backend, when it reports any.
  std::optional<int64_t> prompt_tokens;
  std::optional<int64_t> completion_tokens;
};

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;

  // Transport-level failures come back as a non-OK status.
  virtual absl::StatusOr<BackendReply> Complete(const PromptEnvelope& prompt,
                                                double temperature) = 0;

  // Backends that cannot take overlapping calls return false and are
  // driven one batch at a time.
  virtual bool SupportsConcurrentCalls() const { return true; }
};

// ceil(characters / 4).
int64_t EstimateTokens(absl::string_view text);
int64_t EstimatePromptTokens(const PromptEnvelope& prompt);

PromptEnvelope BuildPrompt(const std::vector<std::string>& batch,
                           const NetworkComponents& components);

// Requirement lines of a prompt built by BuildPrompt, in order.
std::vector<std::string> BatchRequirements(const PromptEnvelope& prompt);
// Components listed in a prompt built by BuildPrompt.
NetworkComponents PromptComponents(const PromptEnvelope& prompt);

// Finds the first JSON payload between <tag> and </tag>, ignoring any
// surrounding prose, and validates it as an assertion list. Each assertion
// may name the 1-based requirement it came from in "req"; that index is
// returned as the origin ("#3"). When `expected_requirements` is given,
// every requirement 1..n must be covered.
//
// Errors: NotFound when the tag is missing, DataLoss when the answer stops
// before the closing tag, InvalidArgument for malformed JSON and
// FailedPrecondition for schema violations. Messages always quote the tag.
absl::StatusOr<std::vector<RequirementAssertion>> ExtractTaggedJson(
    absl::string_view response, absl::string_view expected_tag,
    std::optional<int> expected_requirements = std::nullopt);

// JSON payload (without tags) for an assertion list; the inverse of what
// ExtractTaggedJson accepts. `requirement_index` parallels `assertions`.
std::string AssertionsToJson(const std::vector<RequirementAssertion>& assertions,
                             const std::vector<int>& requirement_index);

struct TranslationCost {
  int64_t prompt_tokens = 0;
  int64_t completion_tokens = 0;
  int64_t messages_sent = 0;
  int64_t retries_used = 0;
  double estimated_price = 0.0;
};

struct BatchFailure {
  int batch_index = 0;
  std::string reason;
};

struct TranslationResult {
  std::vector<RequirementAssertion> assertions;
  TranslationCost cost;
  std::vector<BatchFailure> failures;
  int batch_count = 0;
};

std::string SerializeCost(const TranslationResult& result);

// Splits `requirements` into ceil(n / batch_size) batches, one backend call
// each plus retries. Assertion origins are "requirement <k>" with k the
// 1-based position in `requirements`; output keeps requirement order no
// matter how batches complete.
absl::StatusOr<TranslationResult> TranslateRequirements(
    const std::vector<std::string>& requirements,
    const TranslatorConfig& config, LlmBackend& backend,
    const NetworkComponents& components = {});

}  // namespace netbuddy

#endif  // NETBUDDY_TRANSLATOR_H_
