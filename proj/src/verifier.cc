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

#include "netbuddy/verifier.h"

#include <algorithm>
#include <set>
#include <tuple>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/string_view.h"
#include "json.hpp"

namespace netbuddy {
namespace {

using nlohmann::json;

std::string Bracketed(const std::vector<NodeId>& nodes) {
  return absl::StrCat("[", absl::StrJoin(nodes, ","), "]");
}

const P4Entry* Lookup(const std::vector<P4Entry>& entries, const NodeId& sw,
                      absl::string_view table, const FieldMap& key) {
  for (const P4Entry& e : entries) {
    if (e.switch_id == sw && e.table == table && e.match == key) return &e;
  }
  return nullptr;
}

std::string TraceSummary(const HostPair& pair, const TraceResult& trace) {
  std::string text = absl::StrCat("trace ", pair.first, "->", pair.second,
                                  " visited ", Bracketed(trace.visited_switches));
  if (trace.delivered) {
    absl::StrAppend(&text, " and was delivered");
  } else {
    absl::StrAppend(&text, " and was dropped (", *trace.drop_reason, ")");
  }
  return text;
}

// Index of `sw` in the trace, or npos.
size_t Position(const TraceResult& trace, const NodeId& sw) {
  auto it = std::find(trace.visited_switches.begin(),
                      trace.visited_switches.end(), sw);
  if (it == trace.visited_switches.end()) return std::string::npos;
  return it - trace.visited_switches.begin();
}

bool ContainsInOrder(const std::vector<NodeId>& sequence,
                     const std::vector<NodeId>& path, size_t start) {
  size_t next = start;
  for (const NodeId& want : sequence) {
    while (next < path.size() && path[next] != want) ++next;
    if (next == path.size()) return false;
    ++next;
  }
  return true;
}

absl::string_view RequirementLabel(AssertionKind kind) {
  switch (kind) {
    case AssertionKind::kReach:
      return "reachability";
    case AssertionKind::kNoReach:
      return "isolation";
    case AssertionKind::kWaypoint:
      return "waypoint";
    case AssertionKind::kAvoid:
      return "avoidance";
  }
  return "requirement";
}

json TraceToJson(const TraceResult& trace) {
  json out = {{"delivered", trace.delivered},
              {"visited", trace.visited_switches},
              {"actions", trace.actions},
              {"hops_used", trace.hops_used}};
  if (trace.drop_reason.has_value()) out["drop_reason"] = *trace.drop_reason;
  return out;
}

// Delivered traces toward `host` that visit `sw`, with sw's position.
std::vector<std::tuple<HostPair, const TraceResult*, size_t>> TracesThrough(
    const std::map<HostPair, TraceResult>& traces, const NodeId& sw,
    const NodeId& host) {
  std::vector<std::tuple<HostPair, const TraceResult*, size_t>> out;
  for (const auto& [pair, trace] : traces) {
    if (pair.second != host || !trace.delivered) continue;
    if (size_t pos = Position(trace, sw); pos != std::string::npos) {
      out.emplace_back(pair, &trace, pos);
    }
  }
  return out;
}

}  // namespace

int TtlBound(const Topology& topology) {
  return static_cast<int>(topology.switches().size()) + 2;
}

TraceResult SimulateForwarding(const Topology& topology,
                               const std::vector<P4Entry>& entries,
                               absl::string_view src, absl::string_view dst) {
  TraceResult trace;
  auto drop = [&](std::string reason) {
    trace.delivered = false;
    trace.drop_reason = std::move(reason);
    return trace;
  };
  absl::StatusOr<Ipv4Interface> src_ip = topology.HostIp(src);
  absl::StatusOr<Ipv4Interface> dst_ip = topology.HostIp(dst);
  absl::StatusOr<NodeId> current = topology.AttachedSwitch(src);
  if (!src_ip.ok() || !dst_ip.ok() || !current.ok()) {
    return drop("source or destination is not an addressed, attached host");
  }
  const FieldMap ip_key = {{"src_ip", src_ip->AddressString()},
                           {"dst_ip", dst_ip->AddressString()}};
  std::optional<int64_t> label;
  NodeId sw = *current;
  const int ttl = TtlBound(topology);

  while (true) {
    if (trace.hops_used == ttl) {
      return drop(absl::StrCat("TTL of ", ttl, " hops exhausted at ", sw,
                               "; forwarding loop"));
    }
    ++trace.hops_used;
    trace.visited_switches.push_back(sw);

    const P4Entry* hit = nullptr;
    if (label.has_value()) {
      const FieldMap key = {{"label", *label}};
      hit = Lookup(entries, sw, kMplsForward, key);
      if (hit == nullptr) hit = Lookup(entries, sw, kMplsEgress, key);
    } else {
      hit = Lookup(entries, sw, kMplsIngress, ip_key);
    }
    if (hit == nullptr) {
      trace.actions.push_back("drop");
      return drop(label.has_value()
                      ? absl::StrCat("no entry for label ", *label, " on ", sw)
                      : absl::StrCat("no ingress entry for ", src, "->", dst,
                                     " on ", sw));
    }
    trace.actions.push_back(hit->action);

    if (hit->action == kPushAndForward) {
      label = IntField(hit->params, "label");
      if (!label.has_value()) {
        return drop(absl::StrCat("push on ", sw, " carries no label"));
      }
    } else if (hit->action == kPopAndDeliver) {
      label.reset();
    } else if (hit->action != kForward) {
      return drop(absl::StrCat("unknown action '", hit->action, "' on ", sw));
    }

    std::optional<int64_t> port = IntField(hit->params, "port");
    if (!port.has_value()) {
      return drop(absl::StrCat("entry on ", sw, " has no egress port"));
    }
    absl::StatusOr<NodeId> next =
        topology.NeighborOnPort(sw, static_cast<int>(*port));
    if (!next.ok()) {
      return drop(absl::StrCat("port ", *port, " on ", sw, " is not connected"));
    }
    if (topology.IsHost(*next)) {
      if (*next != dst) {
        return drop(absl::StrCat("misdelivered to ", *next));
      }
      if (label.has_value()) {
        return drop(absl::StrCat("reached ", dst, " still carrying label ",
                                 *label));
      }
      std::optional<std::string> mac = StringField(hit->params, "dst_mac");
      absl::StatusOr<MacAddress> want = topology.HostMac(dst);
      if (mac.has_value() && want.ok() && *mac != want->ToString()) {
        return drop(absl::StrCat("frame for ", dst, " rewritten to MAC ", *mac));
      }
      trace.delivered = true;
      return trace;
    }
    sw = *next;
  }
}

absl::string_view CheckStatusName(CheckStatus status) {
  switch (status) {
    case CheckStatus::kSatisfied:
      return "satisfied";
    case CheckStatus::kViolated:
      return "violated";
    case CheckStatus::kVacuous:
      return "vacuous";
  }
  return "unknown";
}

int VerificationReport::Count(CheckStatus status) const {
  return static_cast<int>(
      std::count_if(checks.begin(), checks.end(),
                    [&](const RequirementCheck& c) { return c.status == status; }));
}

VerificationReport VerifyRequirements(const Topology& topology,
                                      const std::vector<P4Entry>& entries,
                                      const FormalSpec& spec) {
  VerificationReport report;
  if (spec.empty()) return report;
  for (const NodeId& src : topology.hosts()) {
    for (const NodeId& dst : topology.hosts()) {
      if (src != dst) {
        report.traces[{src, dst}] =
            SimulateForwarding(topology, entries, src, dst);
      }
    }
  }
  auto attach = [&](RequirementCheck& check, const HostPair& pair) {
    check.evidence_pair = pair;
    check.evidence = report.traces.at(pair);
  };

  for (const NodeId& sw : topology.switches()) {
    for (const NodeId& host : topology.hosts()) {
      RequirementCheck check;
      check.switch_id = sw;
      check.host = host;
      const auto through = TracesThrough(report.traces, sw, host);
      if (spec.Reaches(sw, host)) {
        check.kind = AssertionKind::kReach;
        // Traffic entering at sw must get through.
        for (const auto& [pair, trace] : report.traces) {
          if (pair.second != host || trace.delivered) continue;
          if (*topology.AttachedSwitch(pair.first) != sw) continue;
          check.status = CheckStatus::kViolated;
          check.detail = absl::StrCat(sw, " must reach ", host, " but ",
                                      TraceSummary(pair, trace));
          attach(check, pair);
          break;
        }
        if (check.status != CheckStatus::kViolated) {
          if (through.empty()) {
            check.status = CheckStatus::kVacuous;
            check.detail = absl::StrCat("no traffic toward ", host,
                                        " enters or crosses ", sw);
          } else {
            check.status = CheckStatus::kSatisfied;
            attach(check, std::get<0>(through.front()));
            check.detail = TraceSummary(std::get<0>(through.front()),
                                        *std::get<1>(through.front()));
          }
        }
      } else {
        check.kind = AssertionKind::kNoReach;
        if (through.empty()) {
          check.status = CheckStatus::kSatisfied;
          check.detail = absl::StrCat("no delivered traffic toward ", host,
                                      " crosses ", sw);
        } else {
          check.status = CheckStatus::kViolated;
          const HostPair& pair = std::get<0>(through.front());
          check.detail = absl::StrCat(sw, " is not allowed to reach ", host,
                                      " but ",
                                      TraceSummary(pair, report.traces.at(pair)));
          attach(check, pair);
        }
      }
      report.checks.push_back(std::move(check));
    }
  }

  for (const auto& [key, via] : spec.waypoint) {
    const auto& [sw, host] = key;
    RequirementCheck check;
    check.kind = AssertionKind::kWaypoint;
    check.switch_id = sw;
    check.host = host;
    check.via = via;
    const auto through = TracesThrough(report.traces, sw, host);
    check.status = through.empty() ? CheckStatus::kVacuous
                                   : CheckStatus::kSatisfied;
    check.detail = absl::StrCat("no delivered traffic toward ", host,
                                " crosses ", sw);
    for (const auto& [pair, trace, pos] : through) {
      attach(check, pair);
      check.detail = TraceSummary(pair, *trace);
      if (!ContainsInOrder(via, trace->visited_switches, pos + 1)) {
        check.status = CheckStatus::kViolated;
        check.detail = absl::StrCat("traffic from ", sw, " to ", host,
                                    " must traverse ", Bracketed(via),
                                    " in order but ", check.detail);
        break;
      }
    }
    report.checks.push_back(std::move(check));
  }

  for (const auto& [key, avoid] : spec.avoidance) {
    const auto& [sw, host] = key;
    RequirementCheck check;
    check.kind = AssertionKind::kAvoid;
    check.switch_id = sw;
    check.host = host;
    check.via.assign(avoid.begin(), avoid.end());
    const auto through = TracesThrough(report.traces, sw, host);
    check.status = through.empty() ? CheckStatus::kVacuous
                                   : CheckStatus::kSatisfied;
    check.detail = absl::StrCat("no delivered traffic toward ", host,
                                " crosses ", sw);
    for (const auto& [pair, trace, pos] : through) {
      const std::vector<NodeId>& visited = trace->visited_switches;
      auto bad = std::find_if(visited.begin() + pos + 1, visited.end(),
                              [&](const NodeId& n) { return avoid.contains(n); });
      attach(check, pair);
      check.detail = TraceSummary(pair, *trace);
      if (bad != visited.end()) {
        check.status = CheckStatus::kViolated;
        check.detail = absl::StrCat("traffic from ", sw, " to ", host,
                                    " must avoid ", *bad, " but ",
                                    check.detail);
        break;
      }
    }
    report.checks.push_back(std::move(check));
  }
  return report;
}

std::string SerializeVerificationReport(const VerificationReport& report) {
  json checks = json::array();
  for (const RequirementCheck& c : report.checks) {
    json item = {{"requirement", AssertionKindName(c.kind)},
                 {"switch", c.switch_id},
                 {"host", c.host},
                 {"status", CheckStatusName(c.status)},
                 {"detail", c.detail}};
    if (c.kind == AssertionKind::kWaypoint || c.kind == AssertionKind::kAvoid) {
      item["via"] = c.via;
    }
    if (c.evidence_pair.has_value()) {
      item["evidence"] = TraceToJson(*c.evidence);
      item["evidence"]["pair"] = {c.evidence_pair->first,
                                  c.evidence_pair->second};
    }
    checks.push_back(std::move(item));
  }
  json traces = json::object();
  for (const auto& [pair, trace] : report.traces) {
    traces[pair.first][pair.second] = TraceToJson(trace);
  }
  json out = {{"all_satisfied", report.AllSatisfied()},
              {"summary",
               {{"satisfied", report.Count(CheckStatus::kSatisfied)},
                {"violated", report.Count(CheckStatus::kViolated)},
                {"vacuous", report.Count(CheckStatus::kVacuous)}}},
              {"checks", checks},
              {"traces", traces}};
  return out.dump(2) + "\n";
}

std::string FeedbackMessage(const VerificationReport& report) {
  std::string text;
  for (const RequirementCheck& c : report.checks) {
    if (c.status != CheckStatus::kViolated) continue;
    std::string subject = absl::StrCat(RequirementLabel(c.kind), " (", c.switch_id,
                                       ", ", c.host, ")");
    if (c.kind == AssertionKind::kWaypoint) {
      absl::StrAppend(&subject, " via ", Bracketed(c.via));
    } else if (c.kind == AssertionKind::kAvoid) {
      absl::StrAppend(&subject, " avoiding ", Bracketed(c.via));
    }
    absl::StrAppend(&text, "Requirement ", subject, " is violated: ", c.detail,
                    ".\n");
  }
  return text;
}

std::string FeedbackMessage(const absl::Status& error,
                            absl::string_view expected_tag) {
  return absl::StrCat(
      "Your previous answer could not be used: ", error.message(),
      ". Reply again with the complete formal specification for every "
      "numbered requirement, as a single JSON object enclosed in <",
      expected_tag, "> and </", expected_tag, "> tags.");
}

absl::StatusOr<std::vector<BgpRoute>> SimulateBgpRoutes(
    const BgpTopology& topology, const BgpPolicyState& state,
    absl::string_view prefix, Asn at) {
  if (!topology.HasAs(at)) {
    return absl::NotFoundError(absl::StrCat("AS", at, " is not in the topology"));
  }
  std::optional<Asn> origin = topology.Origin(prefix);
  if (!origin.has_value()) return std::vector<BgpRoute>{};

  auto is_customer_of = [&](Asn customer, Asn provider) {
    const BgpSession* s = topology.FindSession(customer, provider);
    return s != nullptr && s->relationship == Relationship::kCustomerProvider &&
           s->a == customer;
  };
  auto better = [](const BgpRoute& x, const BgpRoute& y) {
    return std::tuple(-x.local_pref, x.as_path.size(), x.neighbor) <
           std::tuple(-y.local_pref, y.as_path.size(), y.neighbor);
  };

  // Best route per AS; the origin holds an empty path.
  std::map<Asn, std::optional<BgpRoute>> best;
  for (const auto& [asn, info] : topology.ases()) best[asn] = std::nullopt;
  best[*origin] = BgpRoute{*origin, {}, kDefaultLocalPref};

  auto candidates = [&](Asn x) {
    std::vector<BgpRoute> out;
    for (Asn n : topology.Neighbors(x)) {
      const std::optional<BgpRoute>& via = best[n];
      if (!via.has_value()) continue;
      const bool from_customer_or_self =
          n == *origin || is_customer_of(via->neighbor, n);
      if (!from_customer_or_self && !is_customer_of(x, n)) continue;
      if (std::find(via->as_path.begin(), via->as_path.end(), x) !=
          via->as_path.end()) {
        continue;
      }
      BgpRoute route;
      route.neighbor = n;
      route.as_path.push_back(n);
      route.as_path.insert(route.as_path.end(), via->as_path.begin(),
                           via->as_path.end());
      route.local_pref = EffectiveLocalPref(state, x, n);
      out.push_back(std::move(route));
    }
    std::sort(out.begin(), out.end(), better);
    return out;
  };

  const size_t max_rounds = 4 * topology.ases().size() + 4;
  bool converged = false;
  for (size_t round = 0; round < max_rounds && !converged; ++round) {
    std::map<Asn, std::optional<BgpRoute>> next = best;
    for (const auto& [asn, info] : topology.ases()) {
      if (asn == *origin) continue;
      std::vector<BgpRoute> routes = candidates(asn);
      next[asn] = routes.empty() ? std::nullopt
                                 : std::optional<BgpRoute>(routes.front());
    }
    converged = next == best;
    best = std::move(next);
  }
  if (!converged) {
    return absl::FailedPreconditionError(absl::StrCat(
        "BGP decisions for ", prefix, " do not settle; policy oscillates"));
  }
  if (at == *origin) return std::vector<BgpRoute>{*best[at]};
  return candidates(at);
}

absl::StatusOr<std::optional<BgpRoute>> SimulateBgpBestPath(
    const BgpTopology& topology, const BgpPolicyState& state,
    absl::string_view prefix, Asn at) {
  absl::StatusOr<std::vector<BgpRoute>> routes =
      SimulateBgpRoutes(topology, state, prefix, at);
  if (!routes.ok()) return routes.status();
  if (routes->empty()) return std::optional<BgpRoute>();
  return std::optional<BgpRoute>(routes->front());
}

absl::StatusOr<BgpCheck> VerifyBgpRequirement(const BgpTopology& topology,
                                              const BgpPolicyState& state,
                                              const BgpRequirement& requirement,
                                              Asn at) {
  auto dest = topology.ases().find(requirement.destination);
  if (dest == topology.ases().end()) {
    return absl::NotFoundError(absl::StrCat(
        "AS", requirement.destination, " is not in the topology"));
  }
  BgpCheck check;
  check.requirement = requirement;
  check.at = at;
  check.satisfied = !dest->second.prefixes.empty();
  for (const std::string& prefix : dest->second.prefixes) {
    absl::StatusOr<std::optional<BgpRoute>> best =
        SimulateBgpBestPath(topology, state, prefix, at);
    if (!best.ok()) return best.status();
    check.satisfied = check.satisfied && best->has_value() &&
                      (*best)->neighbor == requirement.via;
    check.best[prefix] = *best;
  }
  return check;
}

std::string SerializeBgpCheck(const BgpCheck& check) {
  json best = json::object();
  for (const auto& [prefix, route] : check.best) {
    if (!route.has_value()) {
      best[prefix] = nullptr;
      continue;
    }
    best[prefix] = {{"neighbor", route->neighbor},
                    {"as_path", route->as_path},
                    {"local_pref", route->local_pref}};
  }
  json out = {{"at", check.at},
              {"via", check.requirement.via},
              {"destination", check.requirement.destination},
              {"best", best},
              {"satisfied", check.satisfied}};
  return out.dump(2) + "\n";
}

}  // namespace netbuddy
