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

#include "netbuddy/requirement_text.h"

#include <random>
#include <regex>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_replace.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"

namespace netbuddy {
namespace {

// Placeholders: {S} switch, {H} host, {V} ordered waypoint list, {L} list of
// ids, {N} list of hosts that must not be reached.
struct SentenceTemplate {
  AssertionKind kind;
  absl::string_view text;
};

constexpr SentenceTemplate kReachTemplates[kTemplatesPerKind] = {
    {AssertionKind::kReach, "{S} can reach {L}."},
    {AssertionKind::kReach, "Traffic from {S} to {H} should be delivered."},
    {AssertionKind::kReach, "{S} should be able to send traffic to {H}."},
    {AssertionKind::kReach, "Allow {S} to reach {H}."},
    {AssertionKind::kReach, "Switch {S} can forward traffic to host {H}."},
    {AssertionKind::kReach, "{H} must be reachable from {S}."},
};

constexpr SentenceTemplate kWaypointTemplates[kTemplatesPerKind] = {
    {AssertionKind::kWaypoint, "Traffic from {S} to {H} should travel across {V}."},
    {AssertionKind::kWaypoint, "{S} should forward traffic via {V} to reach {H}."},
    {AssertionKind::kWaypoint, "Traffic from {S} towards {H} must traverse {V}."},
    {AssertionKind::kWaypoint, "To reach {H}, {S} must pass through {V}."},
    {AssertionKind::kWaypoint, "{S} must route traffic for {H} through {V}."},
    {AssertionKind::kWaypoint, "Packets from {S} to {H} have to go via {V}."},
};

constexpr SentenceTemplate kAvoidTemplates[kTemplatesPerKind] = {
    {AssertionKind::kAvoid, "To reach {H}, {S} needs to avoid {L}."},
    {AssertionKind::kAvoid, "Traffic from {S} to {H} must avoid {L}."},
    {AssertionKind::kAvoid, "{S} must not use {L} to reach {H}."},
    {AssertionKind::kAvoid, "Traffic from {S} towards {H} should not traverse {L}."},
    {AssertionKind::kAvoid, "Keep traffic from {S} to {H} away from {L}."},
    {AssertionKind::kAvoid, "{S} should avoid {L} when sending to {H}."},
};

// Accepted by the parser only.
constexpr SentenceTemplate kExtraTemplates[] = {
    {AssertionKind::kReach, "{S} can reach {L}, but not {N}."},
    {AssertionKind::kReach, "Switch {S} should have direct reachability to hosts {L}."},
    {AssertionKind::kReach, "Switch {S} should have direct reachability to {L}."},
    {AssertionKind::kNoReach, "{S} cannot send traffic to {L}."},
    {AssertionKind::kNoReach, "{S} cannot reach {L}."},
    {AssertionKind::kNoReach, "{S} must not reach {L}."},
    {AssertionKind::kNoReach, "Traffic from {S} to {H} must be blocked."},
    {AssertionKind::kNoReach, "Block traffic from {S} to {H}."},
    {AssertionKind::kNoReach, "{H} must not be reachable from {S}."},
};

constexpr absl::string_view kIdPattern = "[A-Za-z][A-Za-z0-9_]*";

struct CompiledTemplate {
  AssertionKind kind;
  std::regex pattern;
  std::vector<char> slots;  // placeholder letter per capture group
};

std::string EscapeRegex(absl::string_view text) {
  static const std::regex special(R"([.^$|()\[\]{}*+?\\])");
  return std::regex_replace(std::string(text), special, R"(\$&)");
}

CompiledTemplate Compile(const SentenceTemplate& t) {
  std::string body(absl::StripSuffix(t.text, "."));
  const std::string id(kIdPattern);
  const std::string list =
      absl::StrCat("(", id, "(?:(?:,? and |, )", id, ")*)");
  const std::string via =
      absl::StrCat("(", id, "(?:(?:,? then |, )", id, ")*)");
  std::string regex;
  std::vector<char> slots;
  size_t pos = 0;
  while (pos < body.size()) {
    size_t open = body.find('{', pos);
    if (open == std::string::npos) {
      regex += EscapeRegex(body.substr(pos));
      break;
    }
    regex += EscapeRegex(body.substr(pos, open - pos));
    const char slot = body[open + 1];
    slots.push_back(slot);
    switch (slot) {
      case 'S':
      case 'H':
        regex += absl::StrCat("(", id, ")");
        break;
      case 'V':
        regex += via;
        break;
      default:
        regex += list;
        break;
    }
    pos = open + 3;
  }
  return {t.kind,
          std::regex(absl::StrCat("^", regex, "$"), std::regex::icase),
          std::move(slots)};
}

const std::vector<CompiledTemplate>& AllTemplates() {
  static const std::vector<CompiledTemplate>* templates = [] {
    auto* out = new std::vector<CompiledTemplate>;
    for (const auto* table : {kReachTemplates, kWaypointTemplates,
                              kAvoidTemplates}) {
      for (int i = 0; i < kTemplatesPerKind; ++i) {
        out->push_back(Compile(table[i]));
      }
    }
    for (const SentenceTemplate& t : kExtraTemplates) out->push_back(Compile(t));
    return out;
  }();
  return *templates;
}

std::vector<NodeId> SplitIds(absl::string_view text) {
  static const std::regex separator(",? and |,? then |, ", std::regex::icase);
  std::string s(text);
  std::vector<NodeId> out;
  for (std::sregex_token_iterator it(s.begin(), s.end(), separator, -1), end;
       it != end; ++it) {
    if (it->length() > 0) out.push_back(it->str());
  }
  return out;
}

std::string JoinAnd(const std::vector<NodeId>& ids) {
  if (ids.size() <= 1) return absl::StrJoin(ids, "");
  std::vector<NodeId> head(ids.begin(), ids.end() - 1);
  return absl::StrCat(absl::StrJoin(head, ", "), " and ", ids.back());
}

std::string Fill(absl::string_view text, const NodeId& sw, const NodeId& host,
                 const std::string& list) {
  return absl::StrReplaceAll(
      text, {{"{S}", sw}, {"{H}", host}, {"{V}", list}, {"{L}", list}});
}

std::string NormalizeClause(absl::string_view text) {
  std::string s(absl::StripAsciiWhitespace(text));
  while (!s.empty() && (s.back() == '.' || s.back() == '!')) s.pop_back();
  // Collapse runs of whitespace.
  std::string out;
  for (char c : s) {
    if (absl::ascii_isspace(static_cast<unsigned char>(c))) {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
    } else {
      out.push_back(c);
    }
  }
  return out;
}

bool IsAllToAll(const std::string& clause) {
  static const std::regex all(
      "^all(?: the)? switches can reach all(?: the)?(?: destination)? hosts$",
      std::regex::icase);
  return std::regex_match(clause, all);
}

// Parses a single clause; nullopt-like empty result with ok status means
// "no template matched".
absl::StatusOr<std::vector<RequirementAssertion>> ParseClause(
    const std::string& clause, const NetworkComponents& components,
    bool* matched) {
  *matched = false;
  std::vector<RequirementAssertion> out;
  if (IsAllToAll(clause)) {
    *matched = true;
    if (components.empty()) {
      return absl::FailedPreconditionError(
          "\"all switches\" requirement needs the network components "
          "(switch and host names)");
    }
    for (const NodeId& s : components.switches) {
      for (const NodeId& h : components.hosts) {
        out.push_back({AssertionKind::kReach, s, h, {}, ""});
      }
    }
    return out;
  }
  for (const CompiledTemplate& t : AllTemplates()) {
    std::smatch m;
    if (!std::regex_match(clause, m, t.pattern)) continue;
    *matched = true;
    NodeId sw;
    std::vector<NodeId> hosts;
    std::vector<NodeId> list;
    std::vector<NodeId> denied;
    for (size_t i = 0; i < t.slots.size(); ++i) {
      const std::string value = m[i + 1].str();
      switch (t.slots[i]) {
        case 'S':
          sw = value;
          break;
        case 'H':
          hosts.push_back(value);
          break;
        case 'N':
          denied = SplitIds(value);
          break;
        default:
          list = SplitIds(value);
          break;
      }
    }
    switch (t.kind) {
      case AssertionKind::kReach:
      case AssertionKind::kNoReach: {
        if (hosts.empty()) hosts = list;
        for (const NodeId& h : hosts) out.push_back({t.kind, sw, h, {}, ""});
        for (const NodeId& h : denied) {
          out.push_back({AssertionKind::kNoReach, sw, h, {}, ""});
        }
        break;
      }
      case AssertionKind::kWaypoint:
      case AssertionKind::kAvoid:
        out.push_back({t.kind, sw, hosts.at(0), list, ""});
        break;
    }
    return out;
  }
  return out;
}

}  // namespace

NetworkComponents ComponentsOf(const Topology& topology) {
  return {{topology.switches().begin(), topology.switches().end()},
          {topology.hosts().begin(), topology.hosts().end()}};
}

std::vector<std::string> RenderRequirements(const FormalSpec& spec,
                                            uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&rng](const SentenceTemplate* table) -> absl::string_view {
    return table[rng() % kTemplatesPerKind].text;
  };
  std::vector<std::string> out;
  for (const auto& [sw, hosts] : spec.reachability) {
    for (const NodeId& h : hosts) {
      out.push_back(Fill(pick(kReachTemplates), sw, h, h));
    }
  }
  for (const auto& [pair, via] : spec.waypoint) {
    out.push_back(Fill(pick(kWaypointTemplates), pair.first, pair.second,
                       absl::StrJoin(via, " then ")));
  }
  for (const auto& [pair, avoid] : spec.avoidance) {
    out.push_back(Fill(pick(kAvoidTemplates), pair.first, pair.second,
                       JoinAnd({avoid.begin(), avoid.end()})));
  }
  return out;
}

absl::StatusOr<std::vector<RequirementAssertion>> ParseRequirementSentence(
    absl::string_view sentence, const NetworkComponents& components) {
  const std::string clause = NormalizeClause(sentence);
  if (clause.empty()) {
    return absl::InvalidArgumentError("empty requirement");
  }
  bool matched = false;
  auto whole = ParseClause(clause, components, &matched);
  if (matched) return whole;

  // Clauses joined by ", ": "s2 cannot reach h2, s1 can reach h2".
  for (size_t pos = clause.find(", "); pos != std::string::npos;
       pos = clause.find(", ", pos + 1)) {
    auto head = ParseClause(clause.substr(0, pos), components, &matched);
    if (!matched || !head.ok()) continue;
    auto tail = ParseRequirementSentence(clause.substr(pos + 2), components);
    if (!tail.ok()) continue;
    head->insert(head->end(), tail->begin(), tail->end());
    return head;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("cannot interpret requirement \"", clause, "\""));
}

RequirementsDocument ParseRequirementsDocument(absl::string_view text) {
  RequirementsDocument doc;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    absl::string_view line = absl::StripAsciiWhitespace(raw);
    if (line.empty() || absl::StartsWith(line, "#")) continue;
    if (absl::ConsumePrefix(&line, "- ") || absl::ConsumePrefix(&line, "* ")) {
      line = absl::StripAsciiWhitespace(line);
    }
    std::vector<NodeId>* target = nullptr;
    if (absl::StartsWithIgnoreCase(line, "switches:")) {
      target = &doc.components.switches;
      line.remove_prefix(9);
    } else if (absl::StartsWithIgnoreCase(line, "hosts:")) {
      target = &doc.components.hosts;
      line.remove_prefix(6);
    }
    if (target != nullptr) {
      for (absl::string_view id :
           absl::StrSplit(line, absl::ByAnyChar(", "), absl::SkipEmpty())) {
        target->emplace_back(id);
      }
      continue;
    }
    doc.requirements.emplace_back(line);
  }
  return doc;
}

}  // namespace netbuddy
