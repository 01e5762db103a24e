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

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.h"

namespace netbuddy {
namespace {

using ::netbuddy::testing::ReadDataFile;
using json = nlohmann::json;

struct FourSwitch {
  Topology topology = *LoadTopology(ReadDataFile("four_switch_topology.json"));
  FormalSpec spec = *ParseFormalSpec(ReadDataFile("four_switch_spec.json"));
  std::vector<P4Entry> entries =
      GenerateP4Entries(*SynthesizePaths(topology, spec), topology)->entries;
};

P4Entry* Find(std::vector<P4Entry>& entries, const std::string& sw,
              const std::string& table) {
  for (P4Entry& e : entries) {
    if (e.switch_id == sw && e.table == table) return &e;
  }
  return nullptr;
}

TEST(SimulateForwardingTest, FourSwitchTraces) {
  const FourSwitch l;
  const TraceResult trace =
      SimulateForwarding(l.topology, l.entries, "h2", "h1");
  EXPECT_TRUE(trace.delivered);
  EXPECT_EQ(trace.visited_switches, (std::vector<NodeId>{"s1", "s2", "s4"}));
  EXPECT_EQ(trace.actions, (std::vector<std::string>{
                               kPushAndForward, kForward, kPopAndDeliver}));
  EXPECT_EQ(trace.drop_reason, std::nullopt);
  EXPECT_EQ(trace.hops_used, 3);
}

TEST(SimulateForwardingTest, MissingIngressEntryDrops) {
  const FourSwitch l;
  const TraceResult trace = SimulateForwarding(l.topology, {}, "h2", "h1");
  EXPECT_FALSE(trace.delivered);
  ASSERT_TRUE(trace.drop_reason.has_value());
  EXPECT_EQ(trace.visited_switches, (std::vector<NodeId>{"s1"}));
}

TEST(SimulateForwardingTest, LoopsRunOutOfHops) {
  FourSwitch l;
  // Bounce one label between s2 and s3.
  std::vector<P4Entry> entries = l.entries;
  P4Entry* s2 = Find(entries, "s2", kMplsForward);
  ASSERT_NE(s2, nullptr);
  const int64_t label = *IntField(s2->match, "label");
  s2->params["port"] = int64_t{*l.topology.Port("s2", "s3")};
  entries.push_back({"s3", kMplsForward, {{"label", label}}, kForward,
                     {{"port", int64_t{*l.topology.Port("s3", "s2")}}}});
  const NodeId src = label == 100 ? "h1" : "h2";
  const NodeId dst = label == 100 ? "h2" : "h1";
  const TraceResult trace = SimulateForwarding(l.topology, entries, src, dst);
  EXPECT_FALSE(trace.delivered);
  EXPECT_EQ(trace.hops_used, TtlBound(l.topology));
  EXPECT_EQ(TtlBound(l.topology), 6);
}

TEST(SimulateForwardingTest, DeliveryToWrongHostIsNotDelivered) {
  const Topology t = *LoadTopology(ReadDataFile("mpls_topology.json"));
  FormalSpec spec;
  for (const NodeId& s : t.switches()) spec.reachability[s] = t.hosts();
  std::vector<P4Entry> entries =
      GenerateP4Entries(*SynthesizePaths(t, spec), t)->entries;
  // Point h1->h2's egress at s7 to the s6 link instead of h2.
  for (P4Entry& e : entries) {
    if (e.switch_id == "s7" && e.table == kMplsEgress) {
      e.params["port"] = int64_t{*t.Port("s7", "s6")};
    }
  }
  EXPECT_FALSE(SimulateForwarding(t, entries, "h1", "h2").delivered);
}

TEST(VerifyRequirementsTest, FourSwitchIsSatisfied) {
  const FourSwitch l;
  const VerificationReport report =
      VerifyRequirements(l.topology, l.entries, l.spec);
  EXPECT_TRUE(report.AllSatisfied());
  EXPECT_EQ(report.traces.size(), 2u);
  // 8 reach + 1 waypoint + 1 avoidance; the spec leaves nothing out.
  EXPECT_EQ(report.checks.size(), 10u);
  EXPECT_EQ(report.Count(CheckStatus::kViolated), 0);
  EXPECT_EQ(report.Count(CheckStatus::kSatisfied) +
                report.Count(CheckStatus::kVacuous),
            10);
}

TEST(VerifyRequirementsTest, EmptySpecGivesEmptyReport) {
  const FourSwitch l;
  const VerificationReport report =
      VerifyRequirements(l.topology, l.entries, FormalSpec{});
  EXPECT_TRUE(report.checks.empty());
  EXPECT_TRUE(report.AllSatisfied());
  EXPECT_EQ(FeedbackMessage(report), "");
}

TEST(VerifyRequirementsTest, ClosedWorldNegativeIsViolatedByExtraTraffic) {
  FourSwitch l;
  FormalSpec narrowed = l.spec;
  narrowed.reachability["s2"].erase("h1");
  narrowed.waypoint.clear();
  const VerificationReport report =
      VerifyRequirements(l.topology, l.entries, narrowed);
  EXPECT_FALSE(report.AllSatisfied());
  bool found = false;
  for (const RequirementCheck& c : report.checks) {
    if (c.kind == AssertionKind::kNoReach && c.switch_id == "s2" &&
        c.host == "h1") {
      EXPECT_EQ(c.status, CheckStatus::kViolated);
      ASSERT_TRUE(c.evidence_pair.has_value());
      EXPECT_EQ(*c.evidence_pair, (HostPair{"h2", "h1"}));
      found = true;
    }
  }
  EXPECT_TRUE(found);
  EXPECT_NE(FeedbackMessage(report).find("s2"), std::string::npos);
}

TEST(VerifyRequirementsTest, MissingEntriesViolateReachability) {
  FourSwitch l;
  std::vector<P4Entry> entries = l.entries;
  entries.erase(entries.begin());
  const VerificationReport report =
      VerifyRequirements(l.topology, entries, l.spec);
  EXPECT_FALSE(report.AllSatisfied());
  EXPECT_GT(report.Count(CheckStatus::kViolated), 0);
}

TEST(VerifyRequirementsTest, AvoidanceViolationIsReported) {
  FourSwitch l;
  FormalSpec spec = l.spec;
  spec.avoidance[{"s1", "h1"}] = {"s2"};
  spec.waypoint.clear();
  const VerificationReport report =
      VerifyRequirements(l.topology, l.entries, spec);
  int violated_avoid = 0;
  for (const RequirementCheck& c : report.checks) {
    if (c.kind == AssertionKind::kAvoid && c.status == CheckStatus::kViolated) {
      ++violated_avoid;
    }
  }
  EXPECT_EQ(violated_avoid, 1);
}

TEST(VerifyRequirementsTest, SerializedReportHasSummary) {
  const FourSwitch l;
  const json doc = json::parse(SerializeVerificationReport(
      VerifyRequirements(l.topology, l.entries, l.spec)));
  EXPECT_EQ(doc["all_satisfied"], true);
  EXPECT_EQ(doc["summary"]["violated"], 0);
  EXPECT_EQ(doc["checks"].size(), 10u);
  EXPECT_EQ(doc["traces"]["h2"]["h1"]["visited"],
            json::array({"s1", "s2", "s4"}));
  EXPECT_EQ(CheckStatusName(CheckStatus::kVacuous), "vacuous");
}

TEST(VerifyBgpRequirementTest, ReportsBestRoutePerPrefix) {
  const BgpFixture f = *LoadBgpFixture(ReadDataFile("bgp_fixture.json"));
  absl::StatusOr<BgpCheck> before =
      VerifyBgpRequirement(f.topology, f.policy, {30, 200}, 100);
  ASSERT_TRUE(before.ok()) << before.status();
  EXPECT_FALSE(before->satisfied);
  ASSERT_EQ(before->best.size(), 1u);
  EXPECT_EQ(before->best.begin()->second->neighbor, 20);

  absl::StatusOr<BgpUpdate> update =
      GenerateBgpUpdate(f.topology, f.policy, {30, 200}, 100);
  ASSERT_TRUE(update.ok());
  absl::StatusOr<BgpCheck> after =
      VerifyBgpRequirement(f.topology, update->state, {30, 200}, 100);
  ASSERT_TRUE(after.ok());
  EXPECT_TRUE(after->satisfied);
  const json doc = json::parse(SerializeBgpCheck(*after));
  EXPECT_EQ(doc["satisfied"], true);
  EXPECT_EQ(doc["best"]["100.64.200.0/24"]["neighbor"], 30);
}

}  // namespace
}  // namespace netbuddy
