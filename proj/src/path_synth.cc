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

#include "netbuddy/path_synth.h"

#include <functional>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/string_view.h"
#include "json.hpp"

namespace netbuddy {
namespace {

using nlohmann::json;

// Depth-first search over simple switch paths with exactly `length`
// switches from `from` to `to`. Neighbors are visited in sorted order, so
// candidates of one length arrive in lexicographic order. Reachability and
// avoidance are checked as each switch is appended; waypoints only once the
// path is complete.
class ConstrainedSearch {
 public:
  ConstrainedSearch(const Topology& topology, const FormalSpec& spec,
                    NodeId host, NodeId to)
      : topology_(topology), spec_(spec), host_(std::move(host)),
        to_(std::move(to)) {}

  std::optional<SwitchPath> Find(const NodeId& from, size_t length) {
    length_ = length;
    path_ = {from};
    on_path_ = {from};
    if (!spec_.Reaches(from, host_)) return std::nullopt;
    if (Extend()) return path_;
    return std::nullopt;
  }

 private:
  bool Extend() {
    const NodeId& tail = path_.back();
    if (tail == to_) {
      return path_.size() == length_ && SatisfiesConstraints(path_, host_, spec_);
    }
    if (path_.size() == length_) return false;
    const std::vector<NodeId> neighbors = *topology_.Neighbors(tail);
    for (const NodeId& next : neighbors) {
      if (!topology_.IsSwitch(next) || on_path_.contains(next)) continue;
      if (!Admissible(next)) continue;
      path_.push_back(next);
      on_path_.insert(next);
      if (Extend()) return true;
      on_path_.erase(next);
      path_.pop_back();
    }
    return false;
  }

  bool Admissible(const NodeId& next) const {
    if (!spec_.Reaches(next, host_)) return false;
    for (const NodeId& earlier : path_) {
      auto av = spec_.avoidance.find({earlier, host_});
      if (av != spec_.avoidance.end() && av->second.contains(next)) {
        return false;
      }
    }
    return true;
  }

  const Topology& topology_;
  const FormalSpec& spec_;
  const NodeId host_;
  const NodeId to_;
  size_t length_ = 0;
  SwitchPath path_;
  std::set<NodeId> on_path_;
};

std::string Quoted(const std::string& text) { return json(text).dump(); }

}  // namespace

std::vector<HostPair> UnroutedPairs(const RoutingInfo& routing) {
  std::vector<HostPair> unrouted;
  for (const auto& [pair, path] : routing.paths) {
    if (path.empty()) unrouted.push_back(pair);
  }
  return unrouted;
}

absl::StatusOr<RoutingInfo> SynthesizePaths(const Topology& topology,
                                            const FormalSpec& spec) {
  if (absl::Status s = CheckSpecNodes(spec, topology); !s.ok()) return s;
  RoutingInfo routing;
  const size_t max_length = topology.switches().size();
  for (const NodeId& src : topology.hosts()) {
    absl::StatusOr<NodeId> first = topology.AttachedSwitch(src);
    if (!first.ok()) return first.status();
    for (const NodeId& dst : topology.hosts()) {
      if (src == dst) continue;
      absl::StatusOr<NodeId> last = topology.AttachedSwitch(dst);
      if (!last.ok()) return last.status();
      ConstrainedSearch search(topology, spec, dst, *last);
      SwitchPath& chosen = routing.paths[{src, dst}];
      for (size_t length = 1; length <= max_length; ++length) {
        if (std::optional<SwitchPath> found = search.Find(*first, length)) {
          chosen = *std::move(found);
          break;
        }
      }
    }
  }
  return routing;
}

bool PathSatisfies(const SwitchPath& path, const HostPair& pair,
                   const FormalSpec& spec) {
  return SatisfiesConstraints(path, pair.second, spec);
}

std::optional<std::string> ExplainPathViolation(const SwitchPath& path,
                                                absl::string_view host,
                                                const FormalSpec& spec) {
  if (path.empty()) return "path is empty";
  const NodeId dst(host);
  const std::string shown = absl::StrCat("[", absl::StrJoin(path, ","), "]");
  for (size_t i = 0; i < path.size(); ++i) {
    const NodeId& sw = path[i];
    if (!spec.Reaches(sw, dst)) {
      return absl::StrCat("path ", shown, " passes ", sw,
                          ", which is not allowed to reach ", dst);
    }
    if (auto wp = spec.waypoint.find({sw, dst}); wp != spec.waypoint.end()) {
      size_t next = i + 1;
      for (const NodeId& via : wp->second) {
        while (next < path.size() && path[next] != via) ++next;
        if (next == path.size()) {
          return absl::StrCat("waypoint (", sw, ",", dst, ") requires [",
                              absl::StrJoin(wp->second, ","), "] after ", sw,
                              " but path is ", shown);
        }
        ++next;
      }
    }
    if (auto av = spec.avoidance.find({sw, dst}); av != spec.avoidance.end()) {
      for (size_t j = i + 1; j < path.size(); ++j) {
        if (av->second.contains(path[j])) {
          return absl::StrCat("avoidance (", sw, ",", dst, ") forbids ",
                              path[j], " but path is ", shown);
        }
      }
    }
  }
  return std::nullopt;
}

std::vector<RoutingViolation> ValidateRouting(const RoutingInfo& routing,
                                              const Topology& topology,
                                              const FormalSpec& spec) {
  std::vector<RoutingViolation> violations;
  for (const NodeId& src : topology.hosts()) {
    for (const NodeId& dst : topology.hosts()) {
      if (src != dst && !routing.paths.contains({src, dst})) {
        violations.push_back(
            {{src, dst}, absl::StrCat("no entry for host pair ", src, "->", dst)});
      }
    }
  }
  for (const auto& [pair, path] : routing.paths) {
    const auto& [src, dst] = pair;
    if (!topology.IsHost(src) || !topology.IsHost(dst) || src == dst) {
      violations.push_back(
          {pair, absl::StrCat(src, "->", dst, " is not a pair of distinct hosts")});
      continue;
    }
    if (path.empty()) continue;
    std::set<NodeId> seen;
    std::string shape_error;
    for (size_t i = 0; i < path.size() && shape_error.empty(); ++i) {
      if (!topology.IsSwitch(path[i])) {
        shape_error = absl::StrCat(path[i], " is not a switch");
      } else if (!seen.insert(path[i]).second) {
        shape_error = absl::StrCat("switch ", path[i], " repeats");
      } else if (i > 0 && !topology.HasLink(path[i - 1], path[i])) {
        shape_error =
            absl::StrCat("no link between ", path[i - 1], " and ", path[i]);
      }
    }
    if (shape_error.empty() && path.front() != *topology.AttachedSwitch(src)) {
      shape_error = absl::StrCat("path must start at the switch of ", src);
    }
    if (shape_error.empty() && path.back() != *topology.AttachedSwitch(dst)) {
      shape_error = absl::StrCat("path must end at the switch of ", dst);
    }
    if (!shape_error.empty()) {
      violations.push_back({pair, std::move(shape_error)});
      continue;
    }
    if (std::optional<std::string> why = ExplainPathViolation(path, dst, spec)) {
      violations.push_back({pair, *std::move(why)});
    }
  }
  return violations;
}

std::string SerializeRouting(const RoutingInfo& routing) {
  std::map<NodeId, std::vector<std::pair<NodeId, const SwitchPath*>>> by_src;
  for (const auto& [pair, path] : routing.paths) {
    by_src[pair.first].push_back({pair.second, &path});
  }
  if (by_src.empty()) return "{}\n";
  std::vector<std::string> blocks;
  for (const auto& [src, rows] : by_src) {
    std::vector<std::string> lines;
    for (const auto& [dst, path] : rows) {
      std::vector<std::string> quoted;
      for (const NodeId& sw : *path) quoted.push_back(Quoted(sw));
      lines.push_back(absl::StrCat("    ", Quoted(dst), ": [",
                                   absl::StrJoin(quoted, ", "), "]"));
    }
    blocks.push_back(absl::StrCat("  ", Quoted(src), ": {\n",
                                  absl::StrJoin(lines, ",\n"), "\n  }"));
  }
  return absl::StrCat("{\n", absl::StrJoin(blocks, ",\n"), "\n}\n");
}

absl::StatusOr<RoutingInfo> ParseRouting(absl::string_view text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return absl::InvalidArgumentError("routing information is not valid JSON");
  }
  if (!doc.is_object()) {
    return absl::InvalidArgumentError("routing information must be an object");
  }
  RoutingInfo routing;
  for (const auto& [src, row] : doc.items()) {
    if (!row.is_object()) {
      return absl::InvalidArgumentError(
          absl::StrCat("routing entry for ", src, " must be an object"));
    }
    for (const auto& [dst, path] : row.items()) {
      if (!path.is_array()) {
        return absl::InvalidArgumentError(
            absl::StrCat("path ", src, "->", dst, " must be an array"));
      }
      SwitchPath switches;
      for (const json& sw : path) {
        if (!sw.is_string()) {
          return absl::InvalidArgumentError(
              absl::StrCat("path ", src, "->", dst, " holds a non-string"));
        }
        switches.push_back(sw.get<std::string>());
      }
      routing.paths[{src, dst}] = std::move(switches);
    }
  }
  return routing;
}

}  // namespace netbuddy
