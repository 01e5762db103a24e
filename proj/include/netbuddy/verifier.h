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

// Behavioral checks: packet walks over installed MPLS entries, steady-state
// BGP decisions over policy state, and retry feedback for the translator.

#ifndef NETBUDDY_VERIFIER_H_
#define NETBUDDY_VERIFIER_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "netbuddy/bgp.h"
#include "netbuddy/formal_spec.h"
#include "netbuddy/p4_entries.h"
#include "netbuddy/path_synth.h"
#include "netbuddy/topology.h"

namespace netbuddy {

struct TraceResult {
  bool delivered = false;
  std::vector<NodeId> visited_switches;
  // Action applied at each visited switch, parallel to visited_switches.
  std::vector<std::string> actions;
  // Present iff !delivered.
  std::optional<std::string> drop_reason;
  int hops_used = 0;
};

// Hop budget of one simulated packet.
int TtlBound(const Topology& topology);

TraceResult SimulateForwarding(const Topology& topology,
                               const std::vector<P4Entry>& entries,
                               absl::string_view src, absl::string_view dst);

enum class CheckStatus { kSatisfied, kViolated, kVacuous };

absl::string_view CheckStatusName(CheckStatus status);

struct RequirementCheck {
  // kNoReach marks a closed-world negative.
  AssertionKind kind = AssertionKind::kReach;
  NodeId switch_id;
  NodeId host;
  // Waypoint sequence or avoided switches.
  std::vector<NodeId> via;
  CheckStatus status = CheckStatus::kVacuous;
  std::string detail;
  // Host pair whose trace is the evidence, when one exists.
  std::optional<HostPair> evidence_pair;
  std::optional<TraceResult> evidence;
};

struct VerificationReport {
  std::vector<RequirementCheck> checks;
  std::map<HostPair, TraceResult> traces;

  int Count(CheckStatus status) const;
  bool AllSatisfied() const { return Count(CheckStatus::kViolated) == 0; }
};

// Checks every reachability, waypoint and avoidance entry of `spec`, plus
// every (switch, host) pair the spec leaves out, against the traces of all
// host pairs. An empty spec yields an empty report.
VerificationReport VerifyRequirements(const Topology& topology,
                                      const std::vector<P4Entry>& entries,
                                      const FormalSpec& spec);

std::string SerializeVerificationReport(const VerificationReport& report);

// One line per violation; "" when there are none.
std::string FeedbackMessage(const VerificationReport& report);

// Retry prompt for an answer that could not be parsed; names the tag the
// answer must use.
std::string FeedbackMessage(const absl::Status& error,
                            absl::string_view expected_tag);

struct BgpRoute {
  Asn neighbor = 0;
  // From the neighbor to the origin, inclusive.
  std::vector<Asn> as_path;
  int local_pref = kDefaultLocalPref;

  bool operator==(const BgpRoute&) const = default;
};

// Routes `at` holds for `prefix` after propagation converges, best first.
// Exports follow customer/peer/provider rules: routes learned from a peer
// or provider are passed only to customers.
absl::StatusOr<std::vector<BgpRoute>> SimulateBgpRoutes(
    const BgpTopology& topology, const BgpPolicyState& state,
    absl::string_view prefix, Asn at);

// Best of SimulateBgpRoutes by local-pref, then AS-path length, then
// neighbor ASN; nullopt when no route reaches `at`.
absl::StatusOr<std::optional<BgpRoute>> SimulateBgpBestPath(
    const BgpTopology& topology, const BgpPolicyState& state,
    absl::string_view prefix, Asn at);

struct BgpCheck {
  BgpRequirement requirement;
  Asn at = 0;
  // Per announced prefix of the destination AS.
  std::map<std::string, std::optional<BgpRoute>> best;
  bool satisfied = false;
};

absl::StatusOr<BgpCheck> VerifyBgpRequirement(const BgpTopology& topology,
                                              const BgpPolicyState& state,
                                              const BgpRequirement& requirement,
                                              Asn at);

std::string SerializeBgpCheck(const BgpCheck& check);

}  // namespace netbuddy

#endif  // NETBUDDY_VERIFIER_H_
