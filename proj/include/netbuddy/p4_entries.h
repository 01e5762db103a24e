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

// Table entries for a fixed MPLS dataplane. Each routed host pair gets one
// label: the first switch pushes it, interior switches forward on it, and
// the last switch pops it and hands the packet to the destination host.

#ifndef NETBUDDY_P4_ENTRIES_H_
#define NETBUDDY_P4_ENTRIES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "netbuddy/path_synth.h"
#include "netbuddy/topology.h"

namespace netbuddy {

inline constexpr char kMplsIngress[] = "mpls_ingress";
inline constexpr char kMplsForward[] = "mpls_forward";
inline constexpr char kMplsEgress[] = "mpls_egress";

inline constexpr char kPushAndForward[] = "push_and_forward";
inline constexpr char kForward[] = "forward";
inline constexpr char kPopAndDeliver[] = "pop_and_deliver";

inline constexpr int64_t kFirstLabel = 100;

using FieldValue = std::variant<int64_t, std::string>;
using FieldMap = std::map<std::string, FieldValue>;

struct P4Entry {
  NodeId switch_id;
  std::string table;
  // Ingress: src_ip and dst_ip. Forward and egress: label.
  FieldMap match;
  std::string action;
  // Subset of label, port and dst_mac, depending on the action.
  FieldMap params;

  auto operator<=>(const P4Entry&) const = default;
};

using LabelMap = std::map<HostPair, int64_t>;

struct P4EntrySet {
  std::vector<P4Entry> entries;
  LabelMap label_map;
};

// Sequential from kFirstLabel over non-empty paths in (src, dst) order.
LabelMap AllocateLabels(const RoutingInfo& routing);

// Entries sorted by (switch, table, match, action, params). A path with k
// switches yields exactly k entries.
absl::StatusOr<P4EntrySet> GenerateP4Entries(const RoutingInfo& routing,
                                             const Topology& topology);

// Integer field of an entry's match or params, if present.
std::optional<int64_t> IntField(const FieldMap& fields, absl::string_view key);
std::optional<std::string> StringField(const FieldMap& fields,
                                       absl::string_view key);

// Canonical JSON array, one object per entry in sorted order.
std::string EmitEntriesJson(const P4EntrySet& set);

// The parsed set has an empty label_map; entries are re-sorted.
absl::StatusOr<P4EntrySet> ParseEntriesJson(absl::string_view text);

}  // namespace netbuddy

#endif  // NETBUDDY_P4_ENTRIES_H_
