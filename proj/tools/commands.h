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

// Subcommands of the netbuddy tool. Every stage reads and writes plain
// files, and `pipeline` is the composition of the individual stages.

#ifndef NETBUDDY_TOOLS_COMMANDS_H_
#define NETBUDDY_TOOLS_COMMANDS_H_

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "netbuddy/translator.h"

namespace netbuddy {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
// Conflicts, unroutable requirements or verification violations.
inline constexpr int kExitFindings = 2;

struct TranslatorOptions {
  std::string backend = "mock";
  int batch_size = 10;
  double temperature = 0.0;
  int max_retries = 3;
  int max_in_flight = 4;
  int max_input_tokens = 8192;
  double price_prompt_per_1k = 0.0;
  double price_completion_per_1k = 0.0;
  // Mock fault rules such as "truncate:40".
  std::vector<std::string> mock_faults;
};

absl::StatusOr<TranslatorConfig> ToTranslatorConfig(
    const TranslatorOptions& options);

absl::StatusOr<std::unique_ptr<LlmBackend>> MakeBackend(
    const TranslatorOptions& options);

// `args` excludes the program name. Returns the process exit code.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace netbuddy

#endif  // NETBUDDY_TOOLS_COMMANDS_H_
