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

#include "netbuddy/topology.h"

#include <algorithm>
#include <charconv>
#include <functional>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "json.hpp"

namespace netbuddy {
namespace {

using nlohmann::json;

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

absl::Status NodeNotFound(absl::string_view node) {
  return absl::NotFoundError(absl::StrCat("unknown node '", node, "'"));
}

}  // namespace

absl::StatusOr<MacAddress> MacAddress::Parse(absl::string_view text) {
  std::vector<absl::string_view> parts = absl::StrSplit(text, ':');
  if (parts.size() != 6) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed MAC address '", text, "'"));
  }
  std::array<uint8_t, 6> octets{};
  for (size_t i = 0; i < 6; ++i) {
    if (parts[i].size() != 2 || HexValue(parts[i][0]) < 0 ||
        HexValue(parts[i][1]) < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed MAC address '", text, "'"));
    }
    octets[i] =
        static_cast<uint8_t>(HexValue(parts[i][0]) * 16 + HexValue(parts[i][1]));
  }
  return MacAddress(octets);
}

std::string MacAddress::ToString() const {
  return absl::StrFormat("%02x:%02x:%02x:%02x:%02x:%02x", octets_[0],
                         octets_[1], octets_[2], octets_[3], octets_[4],
                         octets_[5]);
}

absl::StatusOr<uint32_t> ParseIpv4Address(absl::string_view text) {
  std::vector<absl::string_view> parts = absl::StrSplit(text, '.');
  if (parts.size() != 4) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed IPv4 address '", text, "'"));
  }
  uint32_t address = 0;
  for (absl::string_view part : parts) {
    uint32_t octet = 0;
    if (part.empty() || part.size() > 3 || !absl::SimpleAtoi(part, &octet) ||
        octet > 255) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed IPv4 address '", text, "'"));
    }
    address = (address << 8) | octet;
  }
  return address;
}

std::string FormatIpv4Address(uint32_t address) {
  return absl::StrFormat("%d.%d.%d.%d", (address >> 24) & 0xff,
                         (address >> 16) & 0xff, (address >> 8) & 0xff,
                         address & 0xff);
}

absl::StatusOr<Ipv4Interface> Ipv4Interface::Parse(absl::string_view text) {
  std::vector<absl::string_view> parts = absl::StrSplit(text, '/');
  if (parts.size() > 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed IPv4 interface '", text, "'"));
  }
  absl::StatusOr<uint32_t> address = ParseIpv4Address(parts[0]);
  if (!address.ok()) return address.status();
  int prefix_length = 32;
  if (parts.size() == 2 && (!absl::SimpleAtoi(parts[1], &prefix_length) ||
                            prefix_length < 0 || prefix_length > 32)) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed prefix length in '", text, "'"));
  }
  return Ipv4Interface(*address, prefix_length);
}

std::string Ipv4Interface::ToString() const {
  return absl::StrCat(FormatIpv4Address(address_), "/", prefix_length_);
}

std::string Ipv4Interface::AddressString() const {
  return FormatIpv4Address(address_);
}

absl::StatusOr<Topology> Topology::Create(
    std::set<NodeId> switches, std::set<NodeId> hosts, std::vector<Link> links,
    std::map<PortKey, int> ports,
    std::map<NodeId, DeviceConfig> device_configs) {
  Topology t;
  for (const NodeId& s : switches) {
    if (s.empty()) return absl::InvalidArgumentError("empty switch id");
    if (hosts.contains(s)) {
      return absl::InvalidArgumentError(
          absl::StrCat("'", s, "' is declared both as a switch and a host"));
    }
  }
  for (const NodeId& h : hosts) {
    if (h.empty()) return absl::InvalidArgumentError("empty host id");
  }
  t.switches_ = std::move(switches);
  t.hosts_ = std::move(hosts);
  for (const NodeId& n : t.switches_) t.adjacency_[n];
  for (const NodeId& n : t.hosts_) t.adjacency_[n];

  for (auto& [a, b] : links) {
    if (!t.HasNode(a) || !t.HasNode(b)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "link ", a, "-", b, " references unknown node '",
          t.HasNode(a) ? b : a, "'"));
    }
    if (a == b) {
      return absl::InvalidArgumentError(
          absl::StrCat("self-loop link on '", a, "'"));
    }
    Link normalized = a < b ? Link{a, b} : Link{b, a};
    if (!t.links_.insert(normalized).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate link ", a, "-", b));
    }
    t.adjacency_[a].push_back(b);
    t.adjacency_[b].push_back(a);
  }
  for (auto& [node, adjacent] : t.adjacency_) {
    std::sort(adjacent.begin(), adjacent.end());
  }
  for (const NodeId& h : t.hosts_) {
    if (t.adjacency_[h].size() != 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("host '", h, "' must have exactly one link, has ",
                       t.adjacency_[h].size()));
    }
  }

  for (const auto& [key, port] : ports) {
    if (!t.HasLink(key.first, key.second)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "port defined for ", key.first, "->", key.second,
          " but there is no such link"));
    }
    if (port < 0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "negative port number on ", key.first, "->", key.second));
    }
  }
  for (const auto& [a, b] : t.links_) {
    for (const auto& key : {PortKey{a, b}, PortKey{b, a}}) {
      if (!ports.contains(key)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "missing port for ", key.first, "->", key.second));
      }
    }
  }
  std::map<NodeId, std::set<int>> used_ports;
  for (const auto& [key, port] : ports) {
    if (!used_ports[key.first].insert(port).second) {
      return absl::InvalidArgumentError(absl::StrCat(
          "port ", port, " used twice on '", key.first, "'"));
    }
  }
  t.ports_ = std::move(ports);

  std::map<MacAddress, NodeId> seen_macs;
  std::map<uint32_t, NodeId> seen_ips;
  for (const auto& [node, config] : device_configs) {
    if (!t.HasNode(node)) {
      return absl::InvalidArgumentError(
          absl::StrCat("device config for unknown node '", node, "'"));
    }
    for (const auto& [where, mac] : config.mac_addresses) {
      auto [it, inserted] = seen_macs.emplace(mac, node);
      if (!inserted) {
        return absl::InvalidArgumentError(
            absl::StrCat("MAC ", mac.ToString(), " assigned to both '",
                         it->second, "' and '", node, "'"));
      }
    }
    for (const auto& [where, ip] : config.ip_addresses) {
      auto [it, inserted] = seen_ips.emplace(ip.address(), node);
      if (!inserted) {
        return absl::InvalidArgumentError(
            absl::StrCat("IP ", ip.AddressString(), " assigned to both '",
                         it->second, "' and '", node, "'"));
      }
    }
  }
  for (const NodeId& h : t.hosts_) {
    auto it = device_configs.find(h);
    if (it == device_configs.end() || it->second.ip_addresses.size() != 1 ||
        it->second.mac_addresses.size() != 1 ||
        !it->second.ip_addresses.contains(h) ||
        !it->second.mac_addresses.contains(h)) {
      return absl::InvalidArgumentError(
          absl::StrCat("host '", h, "' needs exactly one IP and one MAC"));
    }
  }
  for (const auto& [key, port] : t.ports_) {
    if (!t.IsSwitch(key.first)) continue;
    auto it = device_configs.find(key.first);
    if (it == device_configs.end() ||
        !it->second.mac_addresses.contains(std::to_string(port))) {
      return absl::InvalidArgumentError(absl::StrCat(
          "switch '", key.first, "' port ", port, " has no MAC address"));
    }
  }
  t.device_configs_ = std::move(device_configs);
  return t;
}

bool Topology::HasNode(absl::string_view node) const {
  return IsSwitch(node) || IsHost(node);
}

bool Topology::IsSwitch(absl::string_view node) const {
  return switches_.find(NodeId(node)) != switches_.end();
}

bool Topology::IsHost(absl::string_view node) const {
  return hosts_.find(NodeId(node)) != hosts_.end();
}

bool Topology::HasLink(absl::string_view a, absl::string_view b) const {
  Link key = a < b ? Link{NodeId(a), NodeId(b)} : Link{NodeId(b), NodeId(a)};
  return links_.contains(key);
}

absl::StatusOr<std::vector<NodeId>> Topology::Neighbors(
    absl::string_view node) const {
  auto it = adjacency_.find(NodeId(node));
  if (it == adjacency_.end()) return NodeNotFound(node);
  return it->second;
}

absl::StatusOr<int> Topology::Port(absl::string_view node,
                                   absl::string_view neighbor) const {
  auto it = ports_.find(PortKey{NodeId(node), NodeId(neighbor)});
  if (it == ports_.end()) {
    return absl::NotFoundError(
        absl::StrCat("no port on '", node, "' toward '", neighbor, "'"));
  }
  return it->second;
}

absl::StatusOr<NodeId> Topology::NeighborOnPort(absl::string_view node,
                                                int port) const {
  auto it = adjacency_.find(NodeId(node));
  if (it == adjacency_.end()) return NodeNotFound(node);
  for (const NodeId& neighbor : it->second) {
    if (ports_.at(PortKey{NodeId(node), neighbor}) == port) return neighbor;
  }
  return absl::NotFoundError(
      absl::StrCat("port ", port, " on '", node, "' is not connected"));
}

absl::StatusOr<NodeId> Topology::AttachedSwitch(absl::string_view host) const {
  if (!IsHost(host)) {
    return absl::NotFoundError(absl::StrCat("unknown host '", host, "'"));
  }
  return adjacency_.at(NodeId(host)).front();
}

absl::StatusOr<Ipv4Interface> Topology::HostIp(absl::string_view host) const {
  if (!IsHost(host)) {
    return absl::NotFoundError(absl::StrCat("unknown host '", host, "'"));
  }
  return device_configs_.at(NodeId(host)).ip_addresses.begin()->second;
}

absl::StatusOr<MacAddress> Topology::HostMac(absl::string_view host) const {
  if (!IsHost(host)) {
    return absl::NotFoundError(absl::StrCat("unknown host '", host, "'"));
  }
  return device_configs_.at(NodeId(host)).mac_addresses.begin()->second;
}

std::optional<NodeId> Topology::HostByAddress(uint32_t address) const {
  for (const NodeId& h : hosts_) {
    if (device_configs_.at(h).ip_addresses.begin()->second.address() ==
        address) {
      return h;
    }
  }
  return std::nullopt;
}

absl::StatusOr<std::vector<SwitchPath>> Topology::AllSimplePaths(
    absl::string_view src, absl::string_view dst,
    std::optional<int> max_switches) const {
  if (!HasNode(src)) return NodeNotFound(src);
  if (!HasNode(dst)) return NodeNotFound(dst);
  if (src == dst) {
    return absl::InvalidArgumentError("source and destination must differ");
  }
  const int limit = max_switches.value_or(static_cast<int>(switches_.size()));
  if (limit < 1) {
    return absl::InvalidArgumentError("max_switches must be at least 1");
  }

  std::vector<SwitchPath> paths;
  std::vector<NodeId> stack{NodeId(src)};
  std::set<NodeId> on_stack{NodeId(src)};
  int switch_count = IsSwitch(src) ? 1 : 0;

  std::function<void(const NodeId&)> extend = [&](const NodeId& node) {
    for (const NodeId& next : adjacency_.at(node)) {
      if (on_stack.contains(next)) continue;
      if (next == dst) {
        SwitchPath path;
        for (const NodeId& n : stack) {
          if (IsSwitch(n)) path.push_back(n);
        }
        if (IsSwitch(next)) path.push_back(next);
        if (!path.empty() && static_cast<int>(path.size()) <= limit) {
          paths.push_back(std::move(path));
        }
        continue;
      }
      // Hosts are leaves and cannot be transit nodes.
      if (!IsSwitch(next) || switch_count + 1 > limit) continue;
      stack.push_back(next);
      on_stack.insert(next);
      ++switch_count;
      extend(next);
      --switch_count;
      on_stack.erase(next);
      stack.pop_back();
    }
  };
  extend(NodeId(src));

  std::sort(paths.begin(), paths.end(),
            [](const SwitchPath& a, const SwitchPath& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  return paths;
}

namespace {

absl::StatusOr<std::vector<std::string>> StringList(const json& value,
                                                    absl::string_view field) {
  if (!value.is_array()) {
    return absl::InvalidArgumentError(
        absl::StrCat("field '", field, "' must be an array of strings"));
  }
  std::vector<std::string> out;
  for (const json& item : value) {
    if (!item.is_string()) {
      return absl::InvalidArgumentError(
          absl::StrCat("field '", field, "' must be an array of strings"));
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

absl::StatusOr<Topology> LoadTopology(absl::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("topology parse error: ", e.what()));
  }
  if (!doc.is_object()) {
    return absl::InvalidArgumentError("topology document must be an object");
  }

  std::set<NodeId> switches;
  std::set<NodeId> hosts;
  for (auto [field, target] :
       {std::pair{"switches", &switches}, std::pair{"hosts", &hosts}}) {
    if (!doc.contains(field)) continue;
    absl::StatusOr<std::vector<std::string>> ids = StringList(doc[field], field);
    if (!ids.ok()) return ids.status();
    for (std::string& id : *ids) {
      if (!target->insert(id).second) {
        return absl::InvalidArgumentError(
            absl::StrCat("'", id, "' listed twice in '", field, "'"));
      }
    }
  }

  std::vector<Topology::Link> links;
  if (doc.contains("links")) {
    if (!doc["links"].is_array()) {
      return absl::InvalidArgumentError("field 'links' must be an array");
    }
    for (size_t i = 0; i < doc["links"].size(); ++i) {
      const json& link = doc["links"][i];
      if (!link.is_array() || link.size() != 2 || !link[0].is_string() ||
          !link[1].is_string()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "links[", i, "] must be a pair of node ids"));
      }
      links.emplace_back(link[0].get<std::string>(),
                         link[1].get<std::string>());
    }
  }

  std::map<Topology::PortKey, int> ports;
  if (doc.contains("ports")) {
    if (!doc["ports"].is_object()) {
      return absl::InvalidArgumentError("field 'ports' must be an object");
    }
    for (const auto& [node, table] : doc["ports"].items()) {
      if (!table.is_object()) {
        return absl::InvalidArgumentError(
            absl::StrCat("ports.", node, " must be an object"));
      }
      for (const auto& [neighbor, port] : table.items()) {
        if (!port.is_number_integer()) {
          return absl::InvalidArgumentError(absl::StrCat(
              "ports.", node, ".", neighbor, " must be an integer"));
        }
        ports[{node, neighbor}] = port.get<int>();
      }
    }
  }
  for (const auto& [a, b] : links) {
    if (hosts.contains(a) && !ports.contains({a, b})) ports[{a, b}] = 0;
    if (hosts.contains(b) && !ports.contains({b, a})) ports[{b, a}] = 0;
  }

  std::map<NodeId, DeviceConfig> devices;
  if (doc.contains("devices")) {
    if (!doc["devices"].is_object()) {
      return absl::InvalidArgumentError("field 'devices' must be an object");
    }
    for (const auto& [node, entry] : doc["devices"].items()) {
      if (!entry.is_object()) {
        return absl::InvalidArgumentError(
            absl::StrCat("devices.", node, " must be an object"));
      }
      DeviceConfig& config = devices[node];
      for (const auto& [key, value] : entry.items()) {
        std::string where = absl::StrCat("devices.", node, ".", key);
        if (key == "ip" || key == "mac") {
          if (!value.is_string()) {
            return absl::InvalidArgumentError(
                absl::StrCat(where, " must be a string"));
          }
          if (key == "ip") {
            auto ip = Ipv4Interface::Parse(value.get<std::string>());
            if (!ip.ok()) {
              return absl::InvalidArgumentError(
                  absl::StrCat(where, ": ", ip.status().message()));
            }
            config.ip_addresses[node] = *ip;
          } else {
            auto mac = MacAddress::Parse(value.get<std::string>());
            if (!mac.ok()) {
              return absl::InvalidArgumentError(
                  absl::StrCat(where, ": ", mac.status().message()));
            }
            config.mac_addresses[node] = *mac;
          }
        } else if (key == "ips" || key == "macs") {
          if (!value.is_object()) {
            return absl::InvalidArgumentError(
                absl::StrCat(where, " must be an object"));
          }
          for (const auto& [port, addr] : value.items()) {
            if (!addr.is_string()) {
              return absl::InvalidArgumentError(
                  absl::StrCat(where, ".", port, " must be a string"));
            }
            if (key == "ips") {
              auto ip = Ipv4Interface::Parse(addr.get<std::string>());
              if (!ip.ok()) {
                return absl::InvalidArgumentError(absl::StrCat(
                    where, ".", port, ": ", ip.status().message()));
              }
              config.ip_addresses[port] = *ip;
            } else {
              auto mac = MacAddress::Parse(addr.get<std::string>());
              if (!mac.ok()) {
                return absl::InvalidArgumentError(absl::StrCat(
                    where, ".", port, ": ", mac.status().message()));
              }
              config.mac_addresses[port] = *mac;
            }
          }
        } else {
          return absl::InvalidArgumentError(
              absl::StrCat("unknown field ", where));
        }
      }
    }
  }

  return Topology::Create(std::move(switches), std::move(hosts),
                          std::move(links), std::move(ports),
                          std::move(devices));
}

std::string SerializeTopology(const Topology& topology) {
  json doc;
  doc["switches"] = topology.switches();
  doc["hosts"] = topology.hosts();
  doc["links"] = json::array();
  for (const auto& [a, b] : topology.links()) {
    doc["links"].push_back({a, b});
  }
  doc["ports"] = json::object();
  for (const auto& [key, port] : topology.ports()) {
    doc["ports"][key.first][key.second] = port;
  }
  doc["devices"] = json::object();
  for (const auto& [node, config] : topology.device_configs()) {
    json& entry = doc["devices"][node];
    entry = json::object();
    if (topology.IsHost(node)) {
      for (const auto& [k, ip] : config.ip_addresses) entry["ip"] = ip.ToString();
      for (const auto& [k, mac] : config.mac_addresses) {
        entry["mac"] = mac.ToString();
      }
      continue;
    }
    for (const auto& [k, ip] : config.ip_addresses) {
      entry["ips"][k] = ip.ToString();
    }
    for (const auto& [k, mac] : config.mac_addresses) {
      entry["macs"][k] = mac.ToString();
    }
  }
  return doc.dump(2) + "\n";
}

}  // namespace netbuddy
