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

// Template English for requirements. RenderRequirements turns a FormalSpec
// into sentences; ParseRequirementSentence is the inverse grammar used by
// the offline mock backend. The grammar also covers a few free-form
// phrasings such as "s1 can reach h1 and h2, but not h3".

#ifndef NETBUDDY_REQUIREMENT_TEXT_H_
#define NETBUDDY_REQUIREMENT_TEXT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "netbuddy/formal_spec.h"

namespace netbuddy {

// Switch and host names that sentences such as "All the switches can reach
// all the destination hosts" expand over.
struct NetworkComponents {
  std::vector<NodeId> switches;
  std::vector<NodeId> hosts;

  bool empty() const { return switches.empty() && hosts.empty(); }
  bool operator==(const NetworkComponents&) const = default;
};

NetworkComponents ComponentsOf(const Topology& topology);

// Templates available per assertion kind.
inline constexpr int kTemplatesPerKind = 6;

// One sentence per reachability entry, waypoint and avoidance entry, in
// that order. The template for each sentence is chosen from `seed`.
std::vector<std::string> RenderRequirements(const FormalSpec& spec,
                                            uint64_t seed);

// Parses one sentence (optionally made of clauses joined by ", ") into
// assertions. Origins are left empty.
absl::StatusOr<std::vector<RequirementAssertion>> ParseRequirementSentence(
    absl::string_view sentence, const NetworkComponents& components);

// Requirements document: one requirement per line. Blank lines and lines
// starting with '#' are skipped; "Switches: s1, s2" and "Hosts: h1" lines
// declare network components instead of requirements.
struct RequirementsDocument {
  NetworkComponents components;
  std::vector<std::string> requirements;
};

RequirementsDocument ParseRequirementsDocument(absl::string_view text);

}  // namespace netbuddy

#endif  // NETBUDDY_REQUIREMENT_TEXT_H_
