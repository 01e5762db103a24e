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

#include "oracles.h"

#include <algorithm>
#include <functional>

namespace netbuddy::testing {

Adjacency SwitchAdjacency(const Topology& topology) {
  Adjacency adjacency;
  for (const auto& s : topology.switches()) adjacency[s];
  for (const auto& [a, b] : topology.links()) {
    if (topology.switches().count(a) && topology.switches().count(b)) {
      adjacency[a].insert(b);
      adjacency[b].insert(a);
    }
  }
  return adjacency;
}

std::vector<std::vector<std::string>> EnumerateSimplePaths(
    const Adjacency& adjacency, const std::string& from,
    const std::string& to) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> stack = {from};
  std::set<std::string> on_stack = {from};
  std::function<void()> extend = [&]() {
    const std::string tail = stack.back();
    if (tail == to) {
      out.push_back(stack);
      return;
    }
    for (const std::string& next : adjacency.at(tail)) {
      if (on_stack.count(next)) continue;
      stack.push_back(next);
      on_stack.insert(next);
      extend();
      on_stack.erase(next);
      stack.pop_back();
    }
  };
  extend();
  return out;
}

namespace {

bool IsOrderedSubsequence(const std::vector<std::string>& needle,
                          const std::vector<std::string>& hay, size_t start) {
  size_t k = 0;
  for (size_t i = start; i < hay.size() && k < needle.size(); ++i) {
    if (hay[i] == needle[k]) ++k;
  }
  return k == needle.size();
}

}  // namespace

bool OracleAllows(const std::vector<std::string>& path, const std::string& host,
                  const FormalSpec& spec) {
  if (path.empty()) return false;
  for (size_t i = 0; i < path.size(); ++i) {
    const std::string& s = path[i];
    auto reach = spec.reachability.find(s);
    if (reach == spec.reachability.end() || !reach->second.count(host)) {
      return false;
    }
    auto wp = spec.waypoint.find({s, host});
    if (wp != spec.waypoint.end() &&
        !IsOrderedSubsequence(wp->second, path, i + 1)) {
      return false;
    }
    auto av = spec.avoidance.find({s, host});
    if (av != spec.avoidance.end()) {
      for (size_t j = i + 1; j < path.size(); ++j) {
        if (av->second.count(path[j])) return false;
      }
    }
  }
  return true;
}

std::string OracleAttachment(const Topology& topology,
                             const std::string& host) {
  for (const auto& [a, b] : topology.links()) {
    if (a == host) return b;
    if (b == host) return a;
  }
  return "";
}

std::vector<std::string> OracleRoute(const Topology& topology,
                                     const std::string& src,
                                     const std::string& dst,
                                     const FormalSpec& spec) {
  const Adjacency adjacency = SwitchAdjacency(topology);
  std::vector<std::vector<std::string>> candidates =
      EnumerateSimplePaths(adjacency, OracleAttachment(topology, src),
                           OracleAttachment(topology, dst));
  std::vector<std::string> best;
  for (const auto& path : candidates) {
    if (!OracleAllows(path, dst, spec)) continue;
    if (best.empty() || path.size() < best.size() ||
        (path.size() == best.size() && path < best)) {
      best = path;
    }
  }
  return best;
}

}  // namespace netbuddy::testing
