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

// Inter-domain model for local-preference policy changes: ASes, eBGP
// sessions with business relationships, inbound route-maps, and vtysh
// scripts that move an AS's primary path onto a chosen neighbor.

#ifndef NETBUDDY_BGP_H_
#define NETBUDDY_BGP_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace netbuddy {

using Asn = int64_t;

inline constexpr int kDefaultLocalPref = 100;
inline constexpr int kPreferredLocalPref = 200;
inline constexpr int kRouteMapSequence = 10;

struct AsInfo {
  std::string name;
  std::vector<std::string> prefixes;
  std::string router_id;

  bool operator==(const AsInfo&) const = default;
};

enum class Relationship { kCustomerProvider, kPeer };

struct BgpSession {
  // For kCustomerProvider, `a` is the customer and `b` its provider.
  Asn a = 0;
  Asn b = 0;
  std::string ip_a;
  std::string ip_b;
  Relationship relationship = Relationship::kPeer;

  bool operator==(const BgpSession&) const = default;
};

class BgpTopology {
 public:
  BgpTopology() = default;

  // Sessions must join known ASes, at most one per AS pair, with unique
  // addresses.
  static absl::StatusOr<BgpTopology> Create(std::map<Asn, AsInfo> ases,
                                            std::vector<BgpSession> sessions);

  const std::map<Asn, AsInfo>& ases() const { return ases_; }
  const std::vector<BgpSession>& sessions() const { return sessions_; }

  bool HasAs(Asn asn) const { return ases_.contains(asn); }
  const BgpSession* FindSession(Asn x, Asn y) const;
  // Neighbors of `asn` in ascending order.
  std::vector<Asn> Neighbors(Asn asn) const;
  // Address `local` uses to reach `neighbor` on their shared session.
  std::optional<std::string> NeighborAddress(Asn local, Asn neighbor) const;
  // The AS announcing `prefix`, if any.
  std::optional<Asn> Origin(absl::string_view prefix) const;

 private:
  std::map<Asn, AsInfo> ases_;
  std::vector<BgpSession> sessions_;
};

struct RouteMap {
  std::optional<int> set_local_preference;

  bool operator==(const RouteMap&) const = default;
};

using AsPairKey = std::pair<Asn, Asn>;  // (local, neighbor)

struct BgpPolicyState {
  std::map<AsPairKey, int> local_pref;
  std::map<std::string, RouteMap> route_maps;
  // Route-map applied inbound on each session end.
  std::map<AsPairKey, std::string> inbound;

  bool operator==(const BgpPolicyState&) const = default;
};

absl::Status ValidatePolicyState(const BgpPolicyState& state,
                                 const BgpTopology& topology);

// Inbound route-map value if one sets it, else the configured value, else
// kDefaultLocalPref.
int EffectiveLocalPref(const BgpPolicyState& state, Asn local, Asn neighbor);

struct BgpFixture {
  BgpTopology topology;
  BgpPolicyState policy;
};

// {"ases": {...}, "sessions": [...], "policy": {...}}.
absl::StatusOr<BgpFixture> LoadBgpFixture(absl::string_view text);
std::string SerializeBgpPolicy(const BgpPolicyState& state);

// "Use AS30 to reach AS200".
struct BgpRequirement {
  Asn via = 0;
  Asn destination = 0;

  bool operator==(const BgpRequirement&) const = default;
};

absl::StatusOr<BgpRequirement> ParseBgpRequirement(absl::string_view text);

struct VtyshScript {
  Asn target_as = 0;
  std::vector<std::string> commands;
};

struct BgpUpdate {
  VtyshScript script;
  BgpPolicyState state;
  // False when the requirement already held and the script is a no-op.
  bool changed = false;
};

absl::StatusOr<BgpUpdate> GenerateBgpUpdate(const BgpTopology& topology,
                                            const BgpPolicyState& state,
                                            const BgpRequirement& requirement,
                                            Asn at);

std::string EmitVtysh(const VtyshScript& script);

// Interprets the command subset EmitVtysh produces against `state`.
absl::StatusOr<BgpPolicyState> ApplyVtyshScript(absl::string_view text,
                                                const BgpTopology& topology,
                                                const BgpPolicyState& state);

}  // namespace netbuddy

#endif  // NETBUDDY_BGP_H_
