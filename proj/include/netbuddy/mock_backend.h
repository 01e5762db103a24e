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

#ifndef NETBUDDY_MOCK_BACKEND_H_
#define NETBUDDY_MOCK_BACKEND_H_

#include <mutex>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "netbuddy/translator.h"

namespace netbuddy {

enum class FaultKind {
  kTruncate,        // answer cut off mid-JSON
  kMissingTag,      // correct JSON, no tags
  kRefuse,          // prose only
  kDropLast,        // last requirement of the batch is not translated
  kTransportError,  // the call itself fails
};

struct FaultRule {
  FaultKind kind = FaultKind::kTruncate;
  // Fires for batches with more than this many requirements.
  int above_batch_size = 0;
  // How many times the rule fires; negative means every time.
  int max_triggers = -1;
};

// "truncate:40", "missing-tag:0:1", "drop-last:10", "refuse:5",
// "transport:0".
absl::StatusOr<FaultRule> ParseFaultRule(absl::string_view text);

// Offline stand-in for a chat model. Reads the batch back out of the
// prompt, translates each sentence with the requirement grammar, and
// answers with tagged JSON wrapped in a little prose. Fault rules inject
// the failure modes seen with real models.
class MockBackend : public LlmBackend {
 public:
  explicit MockBackend(std::vector<FaultRule> rules = {});

  absl::StatusOr<BackendReply> Complete(const PromptEnvelope& prompt,
                                        double temperature) override;

  int calls() const;

 private:
  mutable std::mutex mu_;
  std::vector<FaultRule> rules_;
  std::vector<int> triggered_;
  int calls_ = 0;
};

}  // namespace netbuddy

#endif  // NETBUDDY_MOCK_BACKEND_H_
