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

#ifndef NETBUDDY_TOPOLOGY_H_
#define NETBUDDY_TOPOLOGY_H_

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace netbuddy {

// Switches and hosts are named by opaque strings such as "s1" or "h2".
using NodeId = std::string;

// A sequence of switch ids. Host endpoints are never part of a path.
using SwitchPath = std::vector<NodeId>;

// Path enumeration is exhaustive; past this many switches it gets slow.
inline constexpr int kPracticalSwitchLimit = 12;

class MacAddress {
 public:
  MacAddress() = default;
  explicit MacAddress(std::array<uint8_t, 6> octets) : octets_(octets) {}

  // Accepts "aa:bb:cc:dd:ee:ff" (case-insensitive).
  static absl::StatusOr<MacAddress> Parse(absl::string_view text);

  std::string ToString() const;
  const std::array<uint8_t, 6>& octets() const { return octets_; }

  auto operator<=>(const MacAddress&) const = default;

 private:
  std::array<uint8_t, 6> octets_{};
};

// IPv4 interface address with its prefix length, e.g. 10.0.1.1/24.
class Ipv4Interface {
 public:
  Ipv4Interface() = default;
  Ipv4Interface(uint32_t address, int prefix_length)
      : address_(address), prefix_length_(prefix_length) {}

  // Accepts "a.b.c.d/len"; a bare "a.b.c.d" is read as /32.
  static absl::StatusOr<Ipv4Interface> Parse(absl::string_view text);

  // "a.b.c.d/len".
  std::string ToString() const;
  // "a.b.c.d" without the prefix length.
  std::string AddressString() const;

  uint32_t address() const { return address_; }
  int prefix_length() const { return prefix_length_; }

  auto operator<=>(const Ipv4Interface&) const = default;

 private:
  uint32_t address_ = 0;
  int prefix_length_ = 32;
};

absl::StatusOr<uint32_t> ParseIpv4Address(absl::string_view text);
std::string FormatIpv4Address(uint32_t address);

// Addressing of one node. Switch entries are keyed by port number rendered
// as a decimal string; a host's single entry is keyed by its own id.
struct DeviceConfig {
  std::map<std::string, Ipv4Interface> ip_addresses;
  std::map<std::string, MacAddress> mac_addresses;

  bool operator==(const DeviceConfig&) const = default;
};

// Immutable network graph. Construct through Topology::Create or
// LoadTopology; both enforce the structural invariants:
//  * switch and host ids are disjoint, links join known nodes,
//  * no self-loops or duplicate links,
//  * every host is a leaf with exactly one link,
//  * ports are defined in both directions of every link and unique per node,
//  * every port has a MAC, every host has one IP and one MAC, and MACs and
//    IPs are unique network-wide.
class Topology {
 public:
  using Link = std::pair<NodeId, NodeId>;
  using PortKey = std::pair<NodeId, NodeId>;  // (node, neighbor)

  Topology() = default;

  static absl::StatusOr<Topology> Create(
      std::set<NodeId> switches, std::set<NodeId> hosts,
      std::vector<Link> links, std::map<PortKey, int> ports,
      std::map<NodeId, DeviceConfig> device_configs);

  const std::set<NodeId>& switches() const { return switches_; }
  const std::set<NodeId>& hosts() const { return hosts_; }
  // Each link is stored once, with the lexicographically smaller end first.
  const std::set<Link>& links() const { return links_; }
  const std::map<PortKey, int>& ports() const { return ports_; }
  const std::map<NodeId, DeviceConfig>& device_configs() const {
    return device_configs_;
  }

  bool HasNode(absl::string_view node) const;
  bool IsSwitch(absl::string_view node) const;
  bool IsHost(absl::string_view node) const;
  bool HasLink(absl::string_view a, absl::string_view b) const;

  // Link-adjacent nodes in lexicographic order.
  absl::StatusOr<std::vector<NodeId>> Neighbors(absl::string_view node) const;

  // Port on `node` that faces `neighbor`.
  absl::StatusOr<int> Port(absl::string_view node,
                           absl::string_view neighbor) const;
  // Node reached by leaving `node` through `port`.
  absl::StatusOr<NodeId> NeighborOnPort(absl::string_view node, int port) const;

  // The switch a host hangs off.
  absl::StatusOr<NodeId> AttachedSwitch(absl::string_view host) const;
  absl::StatusOr<Ipv4Interface> HostIp(absl::string_view host) const;
  absl::StatusOr<MacAddress> HostMac(absl::string_view host) const;
  // Host owning `address`, if any.
  std::optional<NodeId> HostByAddress(uint32_t address) const;

  // Every simple path between two nodes, reported as its switch sequence
  // and limited to `max_switches` switches. Ordered by length, then
  // lexicographically. With no limit, the switch count is used.
  absl::StatusOr<std::vector<SwitchPath>> AllSimplePaths(
      absl::string_view src, absl::string_view dst,
      std::optional<int> max_switches = std::nullopt) const;

 private:
  std::set<NodeId> switches_;
  std::set<NodeId> hosts_;
  std::set<Link> links_;
  std::map<NodeId, std::vector<NodeId>> adjacency_;
  std::map<PortKey, int> ports_;
  std::map<NodeId, DeviceConfig> device_configs_;
};

// Parses the JSON topology document:
//   {"switches": [...], "hosts": [...], "links": [["h1","s1"], ...],
//    "ports": {"s1": {"h1": 1}},
//    "devices": {"s1": {"macs": {"1": "..."}, "ips": {"1": "..."}},
//                "h1": {"ip": "10.0.1.1/24", "mac": "..."}}}
// Missing keys read as empty. A host's port toward its switch defaults to 0.
absl::StatusOr<Topology> LoadTopology(absl::string_view text);

// Canonical JSON form accepted by LoadTopology.
std::string SerializeTopology(const Topology& topology);

}  // namespace netbuddy

#endif  // NETBUDDY_TOPOLOGY_H_
