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

#include "netbuddy/mock_backend.h"

#include <optional>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "netbuddy/requirement_text.h"

namespace netbuddy {

absl::StatusOr<FaultRule> ParseFaultRule(absl::string_view text) {
  std::vector<absl::string_view> parts = absl::StrSplit(text, ':');
  FaultRule rule;
  if (parts.size() < 2 || parts.size() > 3) {
    return absl::InvalidArgumentError(absl::StrCat(
        "fault rule '", text, "' must look like kind:above[:times]"));
  }
  if (parts[0] == "truncate") {
    rule.kind = FaultKind::kTruncate;
  } else if (parts[0] == "missing-tag") {
    rule.kind = FaultKind::kMissingTag;
  } else if (parts[0] == "refuse") {
    rule.kind = FaultKind::kRefuse;
  } else if (parts[0] == "drop-last") {
    rule.kind = FaultKind::kDropLast;
  } else if (parts[0] == "transport") {
    rule.kind = FaultKind::kTransportError;
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown fault kind '", parts[0], "'"));
  }
  if (!absl::SimpleAtoi(parts[1], &rule.above_batch_size) ||
      rule.above_batch_size < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad batch-size threshold in '", text, "'"));
  }
  if (parts.size() == 3 && !absl::SimpleAtoi(parts[2], &rule.max_triggers)) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad trigger count in '", text, "'"));
  }
  return rule;
}

MockBackend::MockBackend(std::vector<FaultRule> rules)
    : rules_(std::move(rules)), triggered_(rules_.size(), 0) {}

int MockBackend::calls() const {
  std::lock_guard<std::mutex> lock(mu_);
  return calls_;
}

absl::StatusOr<BackendReply> MockBackend::Complete(const PromptEnvelope& prompt,
                                                   double /*temperature*/) {
  const std::vector<std::string> batch = BatchRequirements(prompt);
  const NetworkComponents components = PromptComponents(prompt);

  std::optional<FaultKind> fault;
  {
    std::lock_guard<std::mutex> lock(mu_);
    ++calls_;
    for (size_t i = 0; i < rules_.size(); ++i) {
      const FaultRule& rule = rules_[i];
      if (static_cast<int>(batch.size()) <= rule.above_batch_size) continue;
      if (rule.max_triggers >= 0 && triggered_[i] >= rule.max_triggers) {
        continue;
      }
      ++triggered_[i];
      fault = rule.kind;
      break;
    }
  }
  if (fault == FaultKind::kTransportError) {
    return absl::UnavailableError("simulated API failure");
  }
  if (fault == FaultKind::kRefuse) {
    return BackendReply{
        "I'm sorry, but this request is too long for me to process reliably.",
        std::nullopt, std::nullopt};
  }

  std::vector<RequirementAssertion> assertions;
  std::vector<int> index;
  const size_t translated =
      fault == FaultKind::kDropLast && !batch.empty() ? batch.size() - 1
                                                      : batch.size();
  for (size_t i = 0; i < translated; ++i) {
    // Sentences outside the grammar are silently skipped, which the
    // translator sees as a forgotten requirement.
    absl::StatusOr<std::vector<RequirementAssertion>> parsed =
        ParseRequirementSentence(batch[i], components);
    if (!parsed.ok()) continue;
    for (RequirementAssertion& a : *parsed) {
      assertions.push_back(std::move(a));
      index.push_back(static_cast<int>(i) + 1);
    }
  }
  const std::string payload = AssertionsToJson(assertions, index);
  const std::string tag = prompt.expected_tag;

  std::string text;
  if (fault == FaultKind::kTruncate) {
    text = absl::StrCat("Here is the specification:\n<", tag, ">",
                        payload.substr(0, payload.size() / 2));
  } else if (fault == FaultKind::kMissingTag) {
    text = absl::StrCat("Here is the specification:\n", payload, "\n");
  } else {
    text = absl::StrCat("Sure! Here is the formal specification:\n<", tag,
                        ">", payload, "</", tag,
                        ">\nLet me know if you need anything else.");
  }
  return BackendReply{std::move(text), std::nullopt, std::nullopt};
}

}  // namespace netbuddy
