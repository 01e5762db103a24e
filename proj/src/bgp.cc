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

#include "netbuddy/bgp.h"

#include <regex>
#include <set>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"
#include "json.hpp"
#include "netbuddy/topology.h"
#include "netbuddy/verifier.h"

namespace netbuddy {
namespace {

using nlohmann::json;

absl::StatusOr<Asn> AsnFromJson(const json& value, absl::string_view what) {
  Asn asn = 0;
  if (value.is_number_integer()) {
    asn = value.get<Asn>();
  } else if (!value.is_string() ||
             !absl::SimpleAtoi(value.get<std::string>(), &asn)) {
    return absl::InvalidArgumentError(
        absl::StrCat("'", what, "' must be an AS number"));
  }
  if (asn <= 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("'", what, "' must be a positive AS number"));
  }
  return asn;
}

std::string RouteMapName(Asn neighbor) {
  return absl::StrCat("RM-PREFER-", neighbor, "-IN");
}

// Parser state for ApplyVtyshScript.
enum class Mode { kExec, kConfig, kRouteMap, kRouterBgp };

}  // namespace

absl::StatusOr<BgpTopology> BgpTopology::Create(
    std::map<Asn, AsInfo> ases, std::vector<BgpSession> sessions) {
  std::set<std::pair<Asn, Asn>> pairs;
  std::set<std::string> addresses;
  for (const BgpSession& s : sessions) {
    if (!ases.contains(s.a) || !ases.contains(s.b)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "session AS", s.a, "-AS", s.b, " references an unknown AS"));
    }
    if (s.a == s.b) {
      return absl::InvalidArgumentError(
          absl::StrCat("session AS", s.a, "-AS", s.b, " joins an AS to itself"));
    }
    if (!pairs.insert(std::minmax(s.a, s.b)).second) {
      return absl::InvalidArgumentError(absl::StrCat(
          "more than one session between AS", s.a, " and AS", s.b));
    }
    for (const std::string& ip : {s.ip_a, s.ip_b}) {
      if (!ParseIpv4Address(ip).ok()) {
        return absl::InvalidArgumentError(
            absl::StrCat("session address '", ip, "' is not IPv4"));
      }
      if (!addresses.insert(ip).second) {
        return absl::InvalidArgumentError(
            absl::StrCat("session address ", ip, " is used twice"));
      }
    }
  }
  BgpTopology topology;
  topology.ases_ = std::move(ases);
  topology.sessions_ = std::move(sessions);
  return topology;
}

const BgpSession* BgpTopology::FindSession(Asn x, Asn y) const {
  for (const BgpSession& s : sessions_) {
    if ((s.a == x && s.b == y) || (s.a == y && s.b == x)) return &s;
  }
  return nullptr;
}

std::vector<Asn> BgpTopology::Neighbors(Asn asn) const {
  std::set<Asn> out;
  for (const BgpSession& s : sessions_) {
    if (s.a == asn) out.insert(s.b);
    if (s.b == asn) out.insert(s.a);
  }
  return {out.begin(), out.end()};
}

std::optional<std::string> BgpTopology::NeighborAddress(Asn local,
                                                        Asn neighbor) const {
  const BgpSession* s = FindSession(local, neighbor);
  if (s == nullptr) return std::nullopt;
  return s->a == local ? s->ip_b : s->ip_a;
}

std::optional<Asn> BgpTopology::Origin(absl::string_view prefix) const {
  for (const auto& [asn, info] : ases_) {
    for (const std::string& p : info.prefixes) {
      if (p == prefix) return asn;
    }
  }
  return std::nullopt;
}

absl::Status ValidatePolicyState(const BgpPolicyState& state,
                                 const BgpTopology& topology) {
  for (const auto& [key, value] : state.local_pref) {
    if (topology.FindSession(key.first, key.second) == nullptr) {
      return absl::InvalidArgumentError(absl::StrCat(
          "local-pref set for AS", key.first, " toward AS", key.second,
          " but they share no session"));
    }
    if (value < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("local-pref ", value, " is negative"));
    }
  }
  for (const auto& [name, map] : state.route_maps) {
    if (map.set_local_preference.has_value() &&
        *map.set_local_preference < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("route-map ", name, " sets a negative local-pref"));
    }
  }
  for (const auto& [key, name] : state.inbound) {
    if (topology.FindSession(key.first, key.second) == nullptr) {
      return absl::InvalidArgumentError(absl::StrCat(
          "route-map ", name, " applied on AS", key.first, " toward AS",
          key.second, " but they share no session"));
    }
    if (!state.route_maps.contains(name)) {
      return absl::InvalidArgumentError(
          absl::StrCat("route-map ", name, " is applied but never defined"));
    }
  }
  return absl::OkStatus();
}

int EffectiveLocalPref(const BgpPolicyState& state, Asn local, Asn neighbor) {
  if (auto in = state.inbound.find({local, neighbor}); in != state.inbound.end()) {
    auto map = state.route_maps.find(in->second);
    if (map != state.route_maps.end() &&
        map->second.set_local_preference.has_value()) {
      return *map->second.set_local_preference;
    }
  }
  if (auto lp = state.local_pref.find({local, neighbor});
      lp != state.local_pref.end()) {
    return lp->second;
  }
  return kDefaultLocalPref;
}

absl::StatusOr<BgpFixture> LoadBgpFixture(absl::string_view text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("BGP fixture must be a JSON object");
  }
  std::map<Asn, AsInfo> ases;
  const json ases_doc = doc.value("ases", json::object());
  for (const auto& [key, value] : ases_doc.items()) {
    absl::StatusOr<Asn> asn = AsnFromJson(json(key), "ases key");
    if (!asn.ok()) return asn.status();
    AsInfo info;
    info.name = value.value("name", absl::StrCat("AS", *asn));
    info.router_id = value.value("router_id", "");
    for (const json& p : value.value("prefixes", json::array())) {
      if (!p.is_string()) {
        return absl::InvalidArgumentError(
            absl::StrCat("AS", *asn, " prefixes must be strings"));
      }
      info.prefixes.push_back(p.get<std::string>());
    }
    ases[*asn] = std::move(info);
  }
  std::vector<BgpSession> sessions;
  for (const json& s : doc.value("sessions", json::array())) {
    BgpSession session;
    absl::StatusOr<Asn> a = AsnFromJson(s.value("a", json()), "a");
    if (!a.ok()) return a.status();
    absl::StatusOr<Asn> b = AsnFromJson(s.value("b", json()), "b");
    if (!b.ok()) return b.status();
    session.a = *a;
    session.b = *b;
    session.ip_a = s.value("ip_a", "");
    session.ip_b = s.value("ip_b", "");
    const std::string rel = s.value("relationship", "");
    if (rel == "peer") {
      session.relationship = Relationship::kPeer;
    } else if (rel == "customer-provider") {
      session.relationship = Relationship::kCustomerProvider;
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "relationship '", rel, "' must be peer or customer-provider"));
    }
    sessions.push_back(std::move(session));
  }
  absl::StatusOr<BgpTopology> topology =
      BgpTopology::Create(std::move(ases), std::move(sessions));
  if (!topology.ok()) return topology.status();

  BgpPolicyState policy;
  const json policy_doc = doc.value("policy", json::object());
  for (const json& lp : policy_doc.value("local_pref", json::array())) {
    absl::StatusOr<Asn> local = AsnFromJson(lp.value("local", json()), "local");
    if (!local.ok()) return local.status();
    absl::StatusOr<Asn> neighbor =
        AsnFromJson(lp.value("neighbor", json()), "neighbor");
    if (!neighbor.ok()) return neighbor.status();
    if (!lp.contains("value") || !lp["value"].is_number_integer()) {
      return absl::InvalidArgumentError("local_pref entries need an integer value");
    }
    policy.local_pref[{*local, *neighbor}] = lp["value"].get<int>();
  }
  const json route_maps_doc = policy_doc.value("route_maps", json::object());
  for (const auto& [name, value] : route_maps_doc.items()) {
    RouteMap map;
    if (value.contains("set_local_preference")) {
      if (!value["set_local_preference"].is_number_integer()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "route-map ", name, " set_local_preference must be an integer"));
      }
      map.set_local_preference = value["set_local_preference"].get<int>();
    }
    policy.route_maps[name] = map;
  }
  for (const json& in : policy_doc.value("inbound", json::array())) {
    absl::StatusOr<Asn> local = AsnFromJson(in.value("local", json()), "local");
    if (!local.ok()) return local.status();
    absl::StatusOr<Asn> neighbor =
        AsnFromJson(in.value("neighbor", json()), "neighbor");
    if (!neighbor.ok()) return neighbor.status();
    policy.inbound[{*local, *neighbor}] = in.value("route_map", "");
  }
  if (absl::Status s = ValidatePolicyState(policy, *topology); !s.ok()) {
    return s;
  }
  return BgpFixture{*std::move(topology), std::move(policy)};
}

std::string SerializeBgpPolicy(const BgpPolicyState& state) {
  json local_pref = json::array();
  for (const auto& [key, value] : state.local_pref) {
    local_pref.push_back(
        {{"local", key.first}, {"neighbor", key.second}, {"value", value}});
  }
  json route_maps = json::object();
  for (const auto& [name, map] : state.route_maps) {
    json entry = json::object();
    if (map.set_local_preference.has_value()) {
      entry["set_local_preference"] = *map.set_local_preference;
    }
    route_maps[name] = entry;
  }
  json inbound = json::array();
  for (const auto& [key, name] : state.inbound) {
    inbound.push_back(
        {{"local", key.first}, {"neighbor", key.second}, {"route_map", name}});
  }
  return json{{"local_pref", local_pref},
              {"route_maps", route_maps},
              {"inbound", inbound}}
             .dump(2) +
         "\n";
}

absl::StatusOr<BgpRequirement> ParseBgpRequirement(absl::string_view text) {
  static const std::regex kPattern(
      R"(^\s*(?:use|prefer|go through|traverse)\s+AS\s*(\d+)\s+to\s+reach\s+AS\s*(\d+)\s*\.?\s*$)",
      std::regex::icase);
  std::smatch m;
  const std::string line(text);
  if (!std::regex_match(line, m, kPattern)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "cannot read BGP requirement '", text,
        "'; expected e.g. \"Use AS30 to reach AS200\""));
  }
  BgpRequirement req;
  if (!absl::SimpleAtoi(m[1].str(), &req.via) ||
      !absl::SimpleAtoi(m[2].str(), &req.destination)) {
    return absl::InvalidArgumentError("AS number out of range");
  }
  return req;
}

absl::StatusOr<BgpUpdate> GenerateBgpUpdate(const BgpTopology& topology,
                                            const BgpPolicyState& state,
                                            const BgpRequirement& requirement,
                                            Asn at) {
  const Asn via = requirement.via;
  if (!topology.HasAs(at)) {
    return absl::NotFoundError(absl::StrCat("AS", at, " is not in the topology"));
  }
  std::optional<std::string> neighbor_ip = topology.NeighborAddress(at, via);
  if (!neighbor_ip.has_value()) {
    return absl::NotFoundError(
        absl::StrCat("AS", at, " has no BGP session with AS", via));
  }
  auto dest = topology.ases().find(requirement.destination);
  if (dest == topology.ases().end() || dest->second.prefixes.empty()) {
    return absl::NotFoundError(absl::StrCat(
        "AS", requirement.destination, " announces no prefix to reach"));
  }

  bool already = true;
  for (const std::string& prefix : dest->second.prefixes) {
    absl::StatusOr<std::vector<BgpRoute>> routes =
        SimulateBgpRoutes(topology, state, prefix, at);
    if (!routes.ok()) return routes.status();
    bool offered = false;
    for (const BgpRoute& r : *routes) offered |= r.neighbor == via;
    if (!offered) {
      return absl::FailedPreconditionError(
          absl::StrCat("AS", requirement.destination, " (", prefix,
                       ") is unreachable via AS", via, " from AS", at));
    }
    already = already && routes->front().neighbor == via;
  }

  BgpUpdate update;
  update.script.target_as = at;
  update.state = state;
  if (already) {
    update.script.commands = {"configure terminal", "end"};
    return update;
  }

  const std::string name = RouteMapName(via);
  update.changed = true;
  update.state.route_maps[name] = RouteMap{kPreferredLocalPref};
  update.state.inbound[{at, via}] = name;
  update.state.local_pref[{at, via}] = kPreferredLocalPref;
  update.script.commands = {
      "configure terminal",
      absl::StrCat("route-map ", name, " permit ", kRouteMapSequence),
      absl::StrCat(" set local-preference ", kPreferredLocalPref),
      "exit",
      absl::StrCat("router bgp ", at),
      absl::StrCat(" neighbor ", *neighbor_ip, " route-map ", name, " in"),
      "end",
  };

  for (const std::string& prefix : dest->second.prefixes) {
    absl::StatusOr<std::optional<BgpRoute>> best =
        SimulateBgpBestPath(topology, update.state, prefix, at);
    if (!best.ok()) return best.status();
    if (!best->has_value() || (*best)->neighbor != via) {
      return absl::FailedPreconditionError(absl::StrCat(
          "raising local-pref toward AS", via, " to ", kPreferredLocalPref,
          " does not make it the best path for ", prefix, " at AS", at));
    }
  }
  return update;
}

std::string EmitVtysh(const VtyshScript& script) {
  std::string text;
  for (const std::string& line : script.commands) {
    absl::StrAppend(&text, line, "\n");
  }
  return text;
}

absl::StatusOr<BgpPolicyState> ApplyVtyshScript(absl::string_view text,
                                                const BgpTopology& topology,
                                                const BgpPolicyState& state) {
  BgpPolicyState out = state;
  Mode mode = Mode::kExec;
  std::string current_map;
  Asn current_as = 0;
  int line_no = 0;
  auto fail = [&](absl::string_view why) {
    return absl::InvalidArgumentError(
        absl::StrCat("vtysh line ", line_no, ": ", why));
  };

  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_no;
    absl::string_view line = absl::StripAsciiWhitespace(raw);
    if (line.empty() || line.front() == '!') continue;
    std::vector<absl::string_view> words =
        absl::StrSplit(line, ' ', absl::SkipEmpty());

    if (mode == Mode::kExec) {
      if (line != "configure terminal") return fail("expected 'configure terminal'");
      mode = Mode::kConfig;
      continue;
    }
    if (line == "end") {
      mode = Mode::kExec;
      continue;
    }
    if (line == "exit") {
      if (mode == Mode::kConfig) return fail("'exit' outside a sub-mode");
      mode = Mode::kConfig;
      continue;
    }
    if (words[0] == "route-map") {
      int seq = 0;
      if (words.size() != 4 || words[2] != "permit" ||
          !absl::SimpleAtoi(words[3], &seq)) {
        return fail("expected 'route-map NAME permit SEQ'");
      }
      current_map = std::string(words[1]);
      out.route_maps.try_emplace(current_map);
      mode = Mode::kRouteMap;
      continue;
    }
    if (words[0] == "router") {
      if (words.size() != 3 || words[1] != "bgp" ||
          !absl::SimpleAtoi(words[2], &current_as) ||
          !topology.HasAs(current_as)) {
        return fail("expected 'router bgp ASN' for a known AS");
      }
      mode = Mode::kRouterBgp;
      continue;
    }
    if (mode == Mode::kRouteMap && words[0] == "set") {
      int value = 0;
      if (words.size() != 3 || words[1] != "local-preference" ||
          !absl::SimpleAtoi(words[2], &value) || value < 0) {
        return fail("expected 'set local-preference N'");
      }
      out.route_maps[current_map].set_local_preference = value;
      continue;
    }
    if (mode == Mode::kRouterBgp && words[0] == "neighbor") {
      if (words.size() != 5 || words[2] != "route-map" || words[4] != "in") {
        return fail("expected 'neighbor A.B.C.D route-map NAME in'");
      }
      std::optional<Asn> neighbor;
      for (Asn n : topology.Neighbors(current_as)) {
        if (topology.NeighborAddress(current_as, n) == words[1]) neighbor = n;
      }
      if (!neighbor.has_value()) {
        return fail(absl::StrCat("AS", current_as, " has no neighbor at ",
                                 words[1]));
      }
      const std::string name(words[3]);
      if (!out.route_maps.contains(name)) {
        return fail(absl::StrCat("route-map ", name, " is not defined"));
      }
      out.inbound[{current_as, *neighbor}] = name;
      if (auto lp = out.route_maps[name].set_local_preference) {
        out.local_pref[{current_as, *neighbor}] = *lp;
      }
      continue;
    }
    return fail(absl::StrCat("unsupported command '", line, "'"));
  }
  if (mode != Mode::kExec) {
    return absl::InvalidArgumentError("vtysh script does not finish with 'end'");
  }
  return out;
}

}  // namespace netbuddy
