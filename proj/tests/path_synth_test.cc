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

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"

namespace netbuddy {
namespace {

using ::netbuddy::testing::MakeTopology;
using ::netbuddy::testing::ReadDataFile;

Topology FourSwitchTopology() {
  return *LoadTopology(ReadDataFile("four_switch_topology.json"));
}

FormalSpec FourSwitchSpec() {
  return *ParseFormalSpec(ReadDataFile("four_switch_spec.json"));
}

FormalSpec FullReach(const Topology& topology) {
  FormalSpec spec;
  for (const NodeId& s : topology.switches()) {
    spec.reachability[s] = topology.hosts();
  }
  return spec;
}

TEST(SynthesizePathsTest, FourSwitchRouting) {
  absl::StatusOr<RoutingInfo> routing =
      SynthesizePaths(FourSwitchTopology(), FourSwitchSpec());
  ASSERT_TRUE(routing.ok()) << routing.status();
  const RoutingInfo expected = {{{{"h1", "h2"}, {"s4", "s2", "s1"}},
                                 {{"h2", "h1"}, {"s1", "s2", "s4"}}}};
  EXPECT_EQ(*routing, expected);
  EXPECT_TRUE(UnroutedPairs(*routing).empty());
  EXPECT_TRUE(
      ValidateRouting(*routing, FourSwitchTopology(), FourSwitchSpec()).empty());
}

TEST(SynthesizePathsTest, UnconstrainedTiesBreakLexicographically) {
  const Topology t = FourSwitchTopology();
  absl::StatusOr<RoutingInfo> routing = SynthesizePaths(t, FullReach(t));
  ASSERT_TRUE(routing.ok());
  EXPECT_EQ(routing->paths.at({"h2", "h1"}),
            (SwitchPath{"s1", "s2", "s4"}));
  EXPECT_EQ(routing->paths.at({"h1", "h2"}),
            (SwitchPath{"s4", "s2", "s1"}));
}

TEST(SynthesizePathsTest, AvoidanceForcesDetour) {
  const Topology t = FourSwitchTopology();
  FormalSpec spec = FullReach(t);
  spec.avoidance[{"s1", "h1"}] = {"s2"};
  absl::StatusOr<RoutingInfo> routing = SynthesizePaths(t, spec);
  ASSERT_TRUE(routing.ok());
  EXPECT_EQ(routing->paths.at({"h2", "h1"}),
            (SwitchPath{"s1", "s3", "s4"}));
}

TEST(SynthesizePathsTest, OrderedWaypointsLengthenPath) {
  const Topology t = FourSwitchTopology();
  FormalSpec spec = FullReach(t);
  spec.waypoint[{"s1", "h1"}] = {"s3", "s2"};
  absl::StatusOr<RoutingInfo> routing = SynthesizePaths(t, spec);
  ASSERT_TRUE(routing.ok());
  EXPECT_EQ(routing->paths.at({"h2", "h1"}),
            (SwitchPath{"s1", "s3", "s2", "s4"}));
}

TEST(SynthesizePathsTest, ClosedWorldLeavesPairsUnrouted) {
  const Topology t = FourSwitchTopology();
  FormalSpec spec = FullReach(t);
  spec.reachability["s1"].erase("h1");
  absl::StatusOr<RoutingInfo> routing = SynthesizePaths(t, spec);
  ASSERT_TRUE(routing.ok());
  EXPECT_TRUE(routing->paths.at({"h2", "h1"}).empty());
  EXPECT_EQ(UnroutedPairs(*routing),
            (std::vector<HostPair>{{"h2", "h1"}}));
}

TEST(SynthesizePathsTest, HostsOnOneSwitchUseThatSwitch) {
  const Topology t =
      MakeTopology({"s1", "s2"}, {"h1", "h2"},
                   {{"s1", "s2"}, {"h1", "s1"}, {"h2", "s1"}});
  absl::StatusOr<RoutingInfo> routing = SynthesizePaths(t, FullReach(t));
  ASSERT_TRUE(routing.ok());
  EXPECT_EQ(routing->paths.at({"h1", "h2"}), (SwitchPath{"s1"}));
}

TEST(SynthesizePathsTest, UnknownSpecNodesAreErrors) {
  FormalSpec spec;
  spec.reachability["s7"] = {"h1"};
  EXPECT_EQ(SynthesizePaths(FourSwitchTopology(), spec).status().code(),
            absl::StatusCode::kNotFound);
}

TEST(ExplainPathViolationTest, NamesTheConstraint) {
  const FormalSpec spec = FourSwitchSpec();
  EXPECT_EQ(ExplainPathViolation({"s4", "s2", "s1"}, "h2", spec), std::nullopt);
  std::optional<std::string> avoid =
      ExplainPathViolation({"s4", "s3", "s1"}, "h2", spec);
  ASSERT_TRUE(avoid.has_value());
  EXPECT_NE(avoid->find("avoidance (s4,h2)"), std::string::npos) << *avoid;
  std::optional<std::string> waypoint =
      ExplainPathViolation({"s1", "s3", "s4"}, "h1", spec);
  ASSERT_TRUE(waypoint.has_value());
  EXPECT_NE(waypoint->find("waypoint"), std::string::npos) << *waypoint;
}

TEST(ValidateRoutingTest, FlagsEachDefect) {
  const Topology t = FourSwitchTopology();
  const FormalSpec spec = FourSwitchSpec();
  const RoutingInfo good = *SynthesizePaths(t, spec);

  RoutingInfo missing = good;
  missing.paths.erase({"h1", "h2"});
  EXPECT_EQ(ValidateRouting(missing, t, spec).size(), 1u);

  RoutingInfo no_link = good;
  no_link.paths[{"h1", "h2"}] = {"s4", "s1"};
  EXPECT_FALSE(ValidateRouting(no_link, t, spec).empty());

  RoutingInfo wrong_start = good;
  wrong_start.paths[{"h1", "h2"}] = {"s2", "s1"};
  EXPECT_FALSE(ValidateRouting(wrong_start, t, spec).empty());

  RoutingInfo loop = good;
  loop.paths[{"h1", "h2"}] = {"s4", "s2", "s4", "s2", "s1"};
  EXPECT_FALSE(ValidateRouting(loop, t, spec).empty());

  RoutingInfo violates = good;
  violates.paths[{"h1", "h2"}] = {"s4", "s3", "s1"};
  const auto found = ValidateRouting(violates, t, spec);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].pair, (HostPair{"h1", "h2"}));

  RoutingInfo extra = good;
  extra.paths[{"h1", "h1"}] = {"s4"};
  EXPECT_FALSE(ValidateRouting(extra, t, spec).empty());
}

TEST(RoutingSerializationTest, InlineArraysRoundTrip) {
  const RoutingInfo routing = {{{{"h1", "h2"}, {"s4", "s2", "s1"}},
                                {{"h1", "h3"}, {}},
                                {{"h2", "h1"}, {"s1", "s2", "s4"}}}};
  const std::string text = SerializeRouting(routing);
  EXPECT_EQ(text,
            "{\n"
            "  \"h1\": {\n"
            "    \"h2\": [\"s4\", \"s2\", \"s1\"],\n"
            "    \"h3\": []\n"
            "  },\n"
            "  \"h2\": {\n"
            "    \"h1\": [\"s1\", \"s2\", \"s4\"]\n"
            "  }\n"
            "}\n");
  absl::StatusOr<RoutingInfo> parsed = ParseRouting(text);
  ASSERT_TRUE(parsed.ok());
  EXPECT_EQ(*parsed, routing);
  EXPECT_FALSE(ParseRouting("[1]").ok());
  EXPECT_FALSE(ParseRouting(R"({"h1": {"h2": [1]}})").ok());
}

}  // namespace
}  // namespace netbuddy
