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

#include "netbuddy/formal_spec.h"

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.h"

namespace netbuddy {
namespace {

using ::netbuddy::testing::ReadDataFile;
using json = nlohmann::json;

RequirementAssertion Assert(AssertionKind kind, const std::string& from,
                            const std::string& to,
                            std::vector<NodeId> via = {},
                            const std::string& origin = "") {
  return {kind, from, to, std::move(via), origin};
}

FormalSpec FourSwitchSpec() {
  FormalSpec spec;
  for (const char* s : {"s1", "s2", "s3", "s4"}) {
    spec.reachability[s] = {"h1", "h2"};
  }
  spec.waypoint[{"s1", "h1"}] = {"s2"};
  spec.avoidance[{"s4", "h2"}] = {"s3"};
  return spec;
}

Topology FourSwitchTopology() {
  return *LoadTopology(ReadDataFile("four_switch_topology.json"));
}

TEST(AssertionKindTest, NamesRoundTrip) {
  for (AssertionKind k : {AssertionKind::kReach, AssertionKind::kNoReach,
                          AssertionKind::kWaypoint, AssertionKind::kAvoid}) {
    EXPECT_EQ(*ParseAssertionKind(AssertionKindName(k)), k);
  }
  EXPECT_FALSE(ParseAssertionKind("isolate").ok());
}

TEST(ValidateAssertionTest, ChecksShape) {
  EXPECT_TRUE(ValidateAssertion(Assert(AssertionKind::kReach, "s1", "h1")).ok());
  EXPECT_FALSE(
      ValidateAssertion(Assert(AssertionKind::kReach, "s1", "h1", {"s2"})).ok());
  EXPECT_FALSE(ValidateAssertion(Assert(AssertionKind::kWaypoint, "s1", "h1")).ok());
  EXPECT_FALSE(ValidateAssertion(
                   Assert(AssertionKind::kWaypoint, "s1", "h1", {"s2", "s2"}))
                   .ok());
  EXPECT_FALSE(
      ValidateAssertion(Assert(AssertionKind::kAvoid, "s1", "h1", {"s1"})).ok());
  EXPECT_FALSE(ValidateAssertion(Assert(AssertionKind::kReach, "", "h1")).ok());
}

TEST(ValidateFormalSpecTest, AcceptsFourSwitchSpec) {
  EXPECT_TRUE(ValidateFormalSpec(FourSwitchSpec()).ok());
}

TEST(ValidateFormalSpecTest, RejectsBrokenInvariants) {
  FormalSpec unreachable = FourSwitchSpec();
  unreachable.reachability["s1"].erase("h1");
  EXPECT_FALSE(ValidateFormalSpec(unreachable).ok());

  FormalSpec overlap = FourSwitchSpec();
  overlap.avoidance[{"s1", "h1"}] = {"s2"};
  EXPECT_FALSE(ValidateFormalSpec(overlap).ok());

  FormalSpec self_waypoint = FourSwitchSpec();
  self_waypoint.waypoint[{"s1", "h1"}] = {"s1"};
  EXPECT_FALSE(ValidateFormalSpec(self_waypoint).ok());

  FormalSpec empty_avoid = FourSwitchSpec();
  empty_avoid.avoidance[{"s4", "h2"}] = {};
  EXPECT_FALSE(ValidateFormalSpec(empty_avoid).ok());
}

TEST(FormalSpecTest, EmptyReachabilitySetsCompareEqualToAbsent) {
  FormalSpec a = FourSwitchSpec();
  FormalSpec b = FourSwitchSpec();
  b.reachability["s9"];
  EXPECT_EQ(a, b);
  b.reachability["s9"].insert("h1");
  EXPECT_NE(a, b);
  EXPECT_TRUE(FormalSpec().empty());
  EXPECT_FALSE(a.empty());
}

TEST(BuildSpecTest, CollapsesFourSwitchAssertions) {
  std::vector<RequirementAssertion> assertions;
  for (const char* s : {"s1", "s2", "s3", "s4"}) {
    for (const char* h : {"h1", "h2"}) {
      assertions.push_back(Assert(AssertionKind::kReach, s, h));
    }
  }
  assertions.push_back(Assert(AssertionKind::kWaypoint, "s1", "h1", {"s2"}));
  assertions.push_back(Assert(AssertionKind::kAvoid, "s4", "h2", {"s3"}));
  absl::StatusOr<BuildResult> built = BuildSpec(assertions);
  ASSERT_TRUE(built.ok());
  EXPECT_TRUE(built->report.empty());
  EXPECT_EQ(built->spec, FourSwitchSpec());
}

TEST(BuildSpecTest, WaypointAndAvoidanceImplyReachability) {
  absl::StatusOr<BuildResult> built =
      BuildSpec({Assert(AssertionKind::kWaypoint, "s1", "h1", {"s2"}),
                 Assert(AssertionKind::kAvoid, "s3", "h2", {"s4"})});
  ASSERT_TRUE(built.ok());
  EXPECT_TRUE(built->spec.Reaches("s1", "h1"));
  EXPECT_TRUE(built->spec.Reaches("s3", "h2"));
}

TEST(BuildSpecTest, ReportsEachExplicitConflictKind) {
  struct Case {
    std::vector<RequirementAssertion> assertions;
    std::string fragment;
  };
  const std::vector<Case> cases = {
      {{Assert(AssertionKind::kReach, "s1", "h2", {}, "a"),
        Assert(AssertionKind::kNoReach, "s1", "h2", {}, "b")},
       "cannot both reach"},
      {{Assert(AssertionKind::kWaypoint, "s1", "h2", {"s2"}, "a"),
        Assert(AssertionKind::kNoReach, "s1", "h2", {}, "b")},
       "waypoint"},
      {{Assert(AssertionKind::kAvoid, "s1", "h2", {"s2"}, "a"),
        Assert(AssertionKind::kNoReach, "s1", "h2", {}, "b")},
       "avoidance"},
      {{Assert(AssertionKind::kWaypoint, "s1", "h2", {"s2"}, "a"),
        Assert(AssertionKind::kWaypoint, "s1", "h2", {"s3"}, "b")},
       "contradictory waypoint"},
      {{Assert(AssertionKind::kWaypoint, "s1", "h2", {"s2"}, "a"),
        Assert(AssertionKind::kAvoid, "s1", "h2", {"s2"}, "b")},
       "traverse and avoid"},
  };
  for (const Case& c : cases) {
    absl::StatusOr<BuildResult> built = BuildSpec(c.assertions);
    ASSERT_TRUE(built.ok());
    ASSERT_EQ(built->report.conflicts.size(), 1u) << c.fragment;
    const Conflict& conflict = built->report.conflicts[0];
    EXPECT_EQ(conflict.kind, ConflictKind::kExplicit);
    EXPECT_EQ(conflict.subject, (SwitchHostPair{"s1", "h2"}));
    EXPECT_NE(conflict.explanation.find(c.fragment), std::string::npos)
        << conflict.explanation;
    EXPECT_EQ(conflict.origins, (std::vector<std::string>{"a", "b"}));
    EXPECT_TRUE(built->spec.waypoint.empty());
  }
}

TEST(BuildSpecTest, DuplicateIdenticalAssertionsAreNotConflicts) {
  absl::StatusOr<BuildResult> built =
      BuildSpec({Assert(AssertionKind::kWaypoint, "s1", "h2", {"s2"}),
                 Assert(AssertionKind::kWaypoint, "s1", "h2", {"s2"}),
                 Assert(AssertionKind::kNoReach, "s1", "h3")});
  ASSERT_TRUE(built.ok());
  EXPECT_TRUE(built->report.empty());
  EXPECT_FALSE(built->spec.Reaches("s1", "h3"));
}

TEST(BuildSpecTest, RejectsMalformedAssertions) {
  EXPECT_FALSE(BuildSpec({Assert(AssertionKind::kWaypoint, "s1", "h2")}).ok());
}

TEST(SatisfiesConstraintsTest, HandWorkedCases) {
  const FormalSpec spec = FourSwitchSpec();
  // Waypoint s2 toward h1 from s1.
  EXPECT_TRUE(SatisfiesConstraints({"s1", "s2", "s4"}, "h1", spec));
  EXPECT_FALSE(SatisfiesConstraints({"s1", "s3", "s4"}, "h1", spec));
  EXPECT_TRUE(SatisfiesConstraints({"s1", "s3", "s2", "s4"}, "h1", spec));
  // s1's waypoint applies only to the suffix after s1.
  EXPECT_TRUE(SatisfiesConstraints({"s3", "s4"}, "h1", spec));
  // s4 avoids s3 toward h2.
  EXPECT_FALSE(SatisfiesConstraints({"s4", "s3", "s1"}, "h2", spec));
  EXPECT_TRUE(SatisfiesConstraints({"s4", "s2", "s1"}, "h2", spec));
  // s3's traffic is not bound by s4's avoidance.
  EXPECT_TRUE(SatisfiesConstraints({"s3", "s1"}, "h2", spec));
  EXPECT_FALSE(SatisfiesConstraints({}, "h1", spec));

  FormalSpec closed = spec;
  closed.reachability["s2"].erase("h1");
  closed.waypoint.clear();
  EXPECT_FALSE(SatisfiesConstraints({"s1", "s2", "s4"}, "h1", closed));
}

TEST(SatisfiesConstraintsTest, WaypointsAreOrdered) {
  FormalSpec spec;
  for (const char* s : {"s1", "s2", "s3", "s4"}) spec.reachability[s] = {"h1"};
  spec.waypoint[{"s1", "h1"}] = {"s3", "s2"};
  EXPECT_TRUE(SatisfiesConstraints({"s1", "s3", "s2", "s4"}, "h1", spec));
  EXPECT_FALSE(SatisfiesConstraints({"s1", "s2", "s3", "s4"}, "h1", spec));
}

TEST(CheckFeasibilityTest, FourSwitchSpecIsFeasible) {
  absl::StatusOr<ConflictReport> report =
      CheckFeasibility(FourSwitchSpec(), FourSwitchTopology());
  ASSERT_TRUE(report.ok());
  EXPECT_TRUE(report->empty());
}

TEST(CheckFeasibilityTest, NamesUnreachableWaypoint) {
  FormalSpec spec;
  spec.reachability["s1"] = {"h1"};
  spec.reachability["s4"] = {"h1"};
  spec.waypoint[{"s1", "h1"}] = {"s2"};
  absl::StatusOr<ConflictReport> report =
      CheckFeasibility(spec, FourSwitchTopology());
  ASSERT_TRUE(report.ok());
  ASSERT_EQ(report->conflicts.size(), 1u);
  EXPECT_EQ(report->conflicts[0].kind, ConflictKind::kImplicit);
  EXPECT_EQ(report->conflicts[0].subject, (SwitchHostPair{"s1", "h1"}));
  EXPECT_NE(report->conflicts[0].explanation.find(
                "waypoint switch s2 is not allowed to reach h1"),
            std::string::npos);
}

TEST(CheckFeasibilityTest, AvoidingEveryRouteIsInfeasible) {
  FormalSpec spec = FourSwitchSpec();
  spec.avoidance[{"s4", "h2"}] = {"s2", "s3"};
  absl::StatusOr<ConflictReport> report =
      CheckFeasibility(spec, FourSwitchTopology());
  ASSERT_TRUE(report.ok());
  ASSERT_EQ(report->conflicts.size(), 1u);
  EXPECT_EQ(report->conflicts[0].subject, (SwitchHostPair{"s4", "h2"}));
}

TEST(CheckFeasibilityTest, UnknownNodesAreErrors) {
  FormalSpec spec;
  spec.reachability["s9"] = {"h1"};
  EXPECT_EQ(CheckFeasibility(spec, FourSwitchTopology()).status().code(),
            absl::StatusCode::kNotFound);
  FormalSpec host;
  host.reachability["s1"] = {"h7"};
  EXPECT_EQ(CheckSpecNodes(host, FourSwitchTopology()).code(),
            absl::StatusCode::kNotFound);
}

TEST(SerializationTest, FourSwitchSpecIsCanonical) {
  const std::string text = SerializeFormalSpec(FourSwitchSpec());
  EXPECT_EQ(text, ReadDataFile("four_switch_spec.json"));
  absl::StatusOr<FormalSpec> parsed = ParseFormalSpec(text);
  ASSERT_TRUE(parsed.ok());
  EXPECT_EQ(*parsed, FourSwitchSpec());
}

TEST(SerializationTest, AcceptsObjectKeyedPairs) {
  const json doc = {
      {"reachability", {{"s1", {"h1", "h2"}}, {"s2", {"h1", "h2"}},
                        {"s3", {"h1", "h2"}}, {"s4", {"h1", "h2"}}}},
      {"waypoint", {{"s1,h1", {"s2"}}}},
      {"avoidance", {{"s4,h2", {"s3"}}}},
  };
  absl::StatusOr<FormalSpec> parsed = ParseFormalSpec(doc.dump());
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(*parsed, FourSwitchSpec());
}

TEST(SerializationTest, RejectsBadDocuments) {
  EXPECT_FALSE(ParseFormalSpec("{").ok());
  EXPECT_FALSE(ParseFormalSpec(R"({"reachability": {}, "extra": 1})").ok());
  EXPECT_FALSE(ParseFormalSpec(R"({"waypoint": {"s1h1": ["s2"]}})").ok());
  EXPECT_FALSE(ParseFormalSpec(
                   R"({"reachability": {"s1": ["h1"]},
                       "waypoint": [{"from": "s1", "to": "h1", "via": ["s2"]},
                                    {"from": "s1", "to": "h1", "via": ["s3"]}]})")
                   .ok());
}

TEST(SerializationTest, ConflictReportListsConflicts) {
  ConflictReport report;
  report.conflicts.push_back(
      {ConflictKind::kExplicit, {"s1", "h2"}, "why", {"requirement 1"}});
  const json doc = json::parse(SerializeConflictReport(report));
  ASSERT_EQ(doc["conflicts"].size(), 1u);
  EXPECT_EQ(doc["conflicts"][0]["kind"], "explicit");
  EXPECT_EQ(doc["conflicts"][0]["switch"], "s1");
  EXPECT_EQ(doc["conflicts"][0]["host"], "h2");
}

}  // namespace
}  // namespace netbuddy
