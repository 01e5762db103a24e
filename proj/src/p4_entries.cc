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

#include "netbuddy/p4_entries.h"

#include <algorithm>
#include <set>
#include <tuple>

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "json.hpp"

namespace netbuddy {
namespace {

using nlohmann::json;

json FieldsToJson(const FieldMap& fields) {
  json out = json::object();
  for (const auto& [key, value] : fields) {
    std::visit([&](const auto& v) { out[key] = v; }, value);
  }
  return out;
}

absl::StatusOr<FieldMap> FieldsFromJson(const json& value,
                                        absl::string_view what) {
  if (!value.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat("entry field '", what, "' must be an object"));
  }
  FieldMap fields;
  for (const auto& [key, v] : value.items()) {
    if (v.is_number_integer()) {
      fields[key] = v.get<int64_t>();
    } else if (v.is_string()) {
      fields[key] = v.get<std::string>();
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "entry field '", what, ".", key, "' must be an integer or string"));
    }
  }
  return fields;
}

absl::StatusOr<std::string> RequiredString(const json& entry,
                                           absl::string_view key) {
  auto it = entry.find(key);
  if (it == entry.end() || !it->is_string()) {
    return absl::InvalidArgumentError(
        absl::StrCat("entry needs a string '", key, "'"));
  }
  return it->get<std::string>();
}

}  // namespace

LabelMap AllocateLabels(const RoutingInfo& routing) {
  LabelMap labels;
  int64_t next = kFirstLabel;
  for (const auto& [pair, path] : routing.paths) {
    if (!path.empty()) labels[pair] = next++;
  }
  return labels;
}

absl::StatusOr<P4EntrySet> GenerateP4Entries(const RoutingInfo& routing,
                                             const Topology& topology) {
  P4EntrySet set;
  set.label_map = AllocateLabels(routing);
  for (const auto& [pair, label] : set.label_map) {
    const auto& [src, dst] = pair;
    const SwitchPath& path = routing.paths.at(pair);
    absl::StatusOr<Ipv4Interface> src_ip = topology.HostIp(src);
    if (!src_ip.ok()) return src_ip.status();
    absl::StatusOr<Ipv4Interface> dst_ip = topology.HostIp(dst);
    if (!dst_ip.ok()) return dst_ip.status();
    absl::StatusOr<MacAddress> dst_mac = topology.HostMac(dst);
    if (!dst_mac.ok()) return dst_mac.status();
    absl::StatusOr<NodeId> ingress = topology.AttachedSwitch(src);
    if (!ingress.ok()) return ingress.status();
    if (path.front() != *ingress) {
      return absl::InvalidArgumentError(
          absl::StrCat("path for ", src, "->", dst, " starts at ",
                       path.front(), " but ", src, " is attached to ",
                       *ingress));
    }

    for (size_t i = 0; i < path.size(); ++i) {
      const bool last = i + 1 == path.size();
      const NodeId& next_hop = last ? dst : path[i + 1];
      absl::StatusOr<int> port = topology.Port(path[i], next_hop);
      if (!port.ok()) return port.status();

      P4Entry entry;
      entry.switch_id = path[i];
      if (i == 0) {
        entry.table = kMplsIngress;
        entry.match = {{"src_ip", src_ip->AddressString()},
                       {"dst_ip", dst_ip->AddressString()}};
      } else {
        entry.table = last ? kMplsEgress : kMplsForward;
        entry.match = {{"label", label}};
      }
      if (last) {
        entry.action = kPopAndDeliver;
        entry.params = {{"port", int64_t{*port}},
                        {"dst_mac", dst_mac->ToString()}};
      } else if (i == 0) {
        entry.action = kPushAndForward;
        entry.params = {{"label", label}, {"port", int64_t{*port}}};
      } else {
        entry.action = kForward;
        entry.params = {{"port", int64_t{*port}}};
      }
      set.entries.push_back(std::move(entry));
    }
  }
  std::sort(set.entries.begin(), set.entries.end());

  std::set<std::tuple<NodeId, std::string, FieldMap>> keys;
  for (const P4Entry& e : set.entries) {
    if (!keys.insert({e.switch_id, e.table, e.match}).second) {
      return absl::FailedPreconditionError(
          absl::StrCat("two entries on ", e.switch_id, " table ", e.table,
                       " share a match key; are host addresses unique?"));
    }
  }
  return set;
}

std::optional<int64_t> IntField(const FieldMap& fields, absl::string_view key) {
  auto it = fields.find(std::string(key));
  if (it == fields.end()) return std::nullopt;
  if (const int64_t* v = std::get_if<int64_t>(&it->second)) return *v;
  return std::nullopt;
}

std::optional<std::string> StringField(const FieldMap& fields,
                                       absl::string_view key) {
  auto it = fields.find(std::string(key));
  if (it == fields.end()) return std::nullopt;
  if (const std::string* v = std::get_if<std::string>(&it->second)) return *v;
  return std::nullopt;
}

std::string EmitEntriesJson(const P4EntrySet& set) {
  std::vector<P4Entry> sorted = set.entries;
  std::sort(sorted.begin(), sorted.end());
  json out = json::array();
  for (const P4Entry& e : sorted) {
    out.push_back({{"switch", e.switch_id},
                   {"table", e.table},
                   {"match", FieldsToJson(e.match)},
                   {"action", e.action},
                   {"params", FieldsToJson(e.params)}});
  }
  return out.dump(2) + "\n";
}

absl::StatusOr<P4EntrySet> ParseEntriesJson(absl::string_view text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_array()) {
    return absl::InvalidArgumentError("entries must be a JSON array");
  }
  P4EntrySet set;
  for (const json& item : doc) {
    if (!item.is_object()) {
      return absl::InvalidArgumentError("each entry must be a JSON object");
    }
    P4Entry entry;
    absl::StatusOr<std::string> sw = RequiredString(item, "switch");
    if (!sw.ok()) return sw.status();
    absl::StatusOr<std::string> table = RequiredString(item, "table");
    if (!table.ok()) return table.status();
    absl::StatusOr<std::string> action = RequiredString(item, "action");
    if (!action.ok()) return action.status();
    absl::StatusOr<FieldMap> match =
        FieldsFromJson(item.value("match", json::object()), "match");
    if (!match.ok()) return match.status();
    absl::StatusOr<FieldMap> params =
        FieldsFromJson(item.value("params", json::object()), "params");
    if (!params.ok()) return params.status();
    entry.switch_id = *std::move(sw);
    entry.table = *std::move(table);
    entry.action = *std::move(action);
    entry.match = *std::move(match);
    entry.params = *std::move(params);
    set.entries.push_back(std::move(entry));
  }
  std::sort(set.entries.begin(), set.entries.end());
  return set;
}

}  // namespace netbuddy
