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

// Routing information: one switch path per ordered pair of distinct hosts,
// chosen as the shortest (then lexicographically least) simple path that
// every switch on it accepts for the destination.

#ifndef NETBUDDY_PATH_SYNTH_H_
#define NETBUDDY_PATH_SYNTH_H_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "netbuddy/formal_spec.h"
#include "netbuddy/topology.h"

namespace netbuddy {

using HostPair = std::pair<NodeId, NodeId>;  // (source host, destination)

struct RoutingInfo {
  // An empty path means no path satisfies the specification.
  std::map<HostPair, SwitchPath> paths;

  bool operator==(const RoutingInfo&) const = default;
};

// Pairs whose path is empty, in key order.
std::vector<HostPair> UnroutedPairs(const RoutingInfo& routing);

absl::StatusOr<RoutingInfo> SynthesizePaths(const Topology& topology,
                                            const FormalSpec& spec);

bool PathSatisfies(const SwitchPath& path, const HostPair& pair,
                   const FormalSpec& spec);

// Why `path` fails the constraints toward `host`, naming the first
// offending switch and constraint; nullopt when it satisfies them.
std::optional<std::string> ExplainPathViolation(const SwitchPath& path,
                                                absl::string_view host,
                                                const FormalSpec& spec);

struct RoutingViolation {
  HostPair pair;
  std::string reason;
};

// Empty when `routing` covers exactly the host pairs of `topology` with
// well-formed paths that satisfy `spec`.
std::vector<RoutingViolation> ValidateRouting(const RoutingInfo& routing,
                                              const Topology& topology,
                                              const FormalSpec& spec);

// {"h1": {"h2": ["s4", "s2", "s1"]}, ...}, one path per line, arrays
// inline, terminated by a newline.
std::string SerializeRouting(const RoutingInfo& routing);
absl::StatusOr<RoutingInfo> ParseRouting(absl::string_view text);

}  // namespace netbuddy

#endif  // NETBUDDY_PATH_SYNTH_H_
