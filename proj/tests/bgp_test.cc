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

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "netbuddy/verifier.h"
#include "test_util.h"

namespace netbuddy {
namespace {

using ::netbuddy::testing::ReadDataFile;
using json = nlohmann::json;

constexpr char kAs200Prefix[] = "100.64.200.0/24";
constexpr char kAs100Prefix[] = "192.0.2.0/24";

BgpFixture Fixture() {
  absl::StatusOr<BgpFixture> fixture =
      LoadBgpFixture(ReadDataFile("bgp_fixture.json"));
  EXPECT_TRUE(fixture.ok()) << fixture.status();
  return *fixture;
}

TEST(BgpRequirementTest, ParsesPhrasings) {
  EXPECT_EQ(*ParseBgpRequirement("Use AS30 to reach AS200"),
            (BgpRequirement{30, 200}));
  EXPECT_EQ(*ParseBgpRequirement("use as30 to reach as200."),
            (BgpRequirement{30, 200}));
  EXPECT_FALSE(ParseBgpRequirement("Prefer the cheap link").ok());
  EXPECT_FALSE(ParseBgpRequirement("Use AS30").ok());
}

TEST(BgpTopologyTest, FixtureShape) {
  const BgpFixture f = Fixture();
  EXPECT_EQ(f.topology.ases().size(), 4u);
  EXPECT_EQ(f.topology.Neighbors(100), (std::vector<Asn>{20, 30}));
  EXPECT_EQ(f.topology.Neighbors(30), (std::vector<Asn>{20, 100, 200}));
  EXPECT_EQ(f.topology.NeighborAddress(100, 30), "172.16.2.2");
  EXPECT_EQ(f.topology.NeighborAddress(30, 100), "172.16.2.1");
  EXPECT_EQ(f.topology.NeighborAddress(100, 200), std::nullopt);
  EXPECT_EQ(f.topology.Origin(kAs200Prefix), 200);
  EXPECT_EQ(f.topology.Origin("10.9.9.0/24"), std::nullopt);
  const BgpSession* s = f.topology.FindSession(30, 100);
  ASSERT_NE(s, nullptr);
  EXPECT_EQ(s->a, 100);
  EXPECT_EQ(s->relationship, Relationship::kCustomerProvider);
}

TEST(BgpTopologyTest, CreateRejectsBadSessions) {
  std::map<Asn, AsInfo> ases = {{1, {"A", {"10.0.0.0/8"}, "1.1.1.1"}},
                                {2, {"B", {}, "2.2.2.2"}}};
  EXPECT_FALSE(BgpTopology::Create(
                   ases, {{1, 3, "1.0.0.1", "1.0.0.2", Relationship::kPeer}})
                   .ok());
  EXPECT_FALSE(BgpTopology::Create(
                   ases, {{1, 2, "1.0.0.1", "1.0.0.2", Relationship::kPeer},
                          {2, 1, "1.0.0.3", "1.0.0.4", Relationship::kPeer}})
                   .ok());
  EXPECT_FALSE(BgpTopology::Create(
                   ases, {{1, 2, "1.0.0.1", "1.0.0.1", Relationship::kPeer}})
                   .ok());
  EXPECT_FALSE(BgpTopology::Create(
                   ases, {{1, 1, "1.0.0.1", "1.0.0.2", Relationship::kPeer}})
                   .ok());
}

TEST(PolicyTest, EffectiveLocalPrefPrecedence) {
  const BgpFixture f = Fixture();
  EXPECT_EQ(EffectiveLocalPref(f.policy, 100, 30), 50);
  EXPECT_EQ(EffectiveLocalPref(f.policy, 100, 20), kDefaultLocalPref);
  BgpPolicyState state = f.policy;
  state.inbound.erase({100, 30});
  state.local_pref[{100, 30}] = 70;
  EXPECT_EQ(EffectiveLocalPref(state, 100, 30), 70);
  state.route_maps["RM-X"] = RouteMap{};
  state.inbound[{100, 30}] = "RM-X";
  EXPECT_EQ(EffectiveLocalPref(state, 100, 30), 70);
}

TEST(PolicyTest, ValidateCatchesDanglingReferences) {
  const BgpFixture f = Fixture();
  EXPECT_TRUE(ValidatePolicyState(f.policy, f.topology).ok());
  BgpPolicyState dangling = f.policy;
  dangling.inbound[{100, 20}] = "RM-MISSING";
  EXPECT_FALSE(ValidatePolicyState(dangling, f.topology).ok());
  BgpPolicyState no_session = f.policy;
  no_session.local_pref[{100, 200}] = 10;
  EXPECT_FALSE(ValidatePolicyState(no_session, f.topology).ok());
}

TEST(PolicyTest, SerializedPolicyLoadsBack) {
  const BgpFixture f = Fixture();
  json doc = json::parse(ReadDataFile("bgp_fixture.json"));
  doc["policy"] = json::parse(SerializeBgpPolicy(f.policy));
  absl::StatusOr<BgpFixture> again = LoadBgpFixture(doc.dump());
  ASSERT_TRUE(again.ok()) << again.status();
  EXPECT_EQ(again->policy, f.policy);
}

TEST(PolicyTest, LoadRejectsMalformedFixtures) {
  EXPECT_FALSE(LoadBgpFixture("[]").ok());
  json doc = json::parse(ReadDataFile("bgp_fixture.json"));
  doc["sessions"][0]["relationship"] = "sibling";
  EXPECT_FALSE(LoadBgpFixture(doc.dump()).ok());
  json no_a = json::parse(ReadDataFile("bgp_fixture.json"));
  no_a["sessions"][0].erase("a");
  EXPECT_FALSE(LoadBgpFixture(no_a.dump()).ok());
}

// Routes worked out by hand from the customer/peer/provider export rules.
TEST(BgpSimulationTest, FixtureRoutesAtAs100) {
  const BgpFixture f = Fixture();
  absl::StatusOr<std::vector<BgpRoute>> routes =
      SimulateBgpRoutes(f.topology, f.policy, kAs200Prefix, 100);
  ASSERT_TRUE(routes.ok()) << routes.status();
  const std::vector<BgpRoute> expected = {{20, {20, 30, 200}, 100},
                                          {30, {30, 200}, 50}};
  EXPECT_EQ(*routes, expected);
}

TEST(BgpSimulationTest, ProviderRoutesAreNotExportedToProviders) {
  const BgpFixture f = Fixture();
  // AS100 learns AS200's prefix only from providers, so AS20 hears it only
  // from its peer AS30.
  absl::StatusOr<std::vector<BgpRoute>> at20 =
      SimulateBgpRoutes(f.topology, f.policy, kAs200Prefix, 20);
  ASSERT_TRUE(at20.ok());
  EXPECT_EQ(*at20, (std::vector<BgpRoute>{{30, {30, 200}, 100}}));
  // Customer routes go everywhere.
  absl::StatusOr<std::vector<BgpRoute>> at200 =
      SimulateBgpRoutes(f.topology, f.policy, kAs100Prefix, 200);
  ASSERT_TRUE(at200.ok());
  EXPECT_EQ(*at200, (std::vector<BgpRoute>{{30, {30, 100}, 100}}));
}

TEST(BgpSimulationTest, TieBreaksOnPathLengthThenNeighbor) {
  const BgpFixture f = Fixture();
  BgpPolicyState equal;
  absl::StatusOr<std::optional<BgpRoute>> best =
      SimulateBgpBestPath(f.topology, equal, kAs200Prefix, 100);
  ASSERT_TRUE(best.ok() && best->has_value());
  EXPECT_EQ((*best)->neighbor, 30);  // shorter path
  absl::StatusOr<std::optional<BgpRoute>> none =
      SimulateBgpBestPath(f.topology, equal, "1.2.3.0/24", 100);
  ASSERT_TRUE(none.ok());
  EXPECT_EQ(*none, std::nullopt);
}

TEST(GenerateBgpUpdateTest, EmitsRouteMapScript) {
  const BgpFixture f = Fixture();
  absl::StatusOr<BgpUpdate> update =
      GenerateBgpUpdate(f.topology, f.policy, {30, 200}, 100);
  ASSERT_TRUE(update.ok()) << update.status();
  EXPECT_TRUE(update->changed);
  EXPECT_EQ(update->script.target_as, 100);
  const std::vector<std::string> expected = {
      "configure terminal",
      "route-map RM-PREFER-30-IN permit 10",
      " set local-preference 200",
      "exit",
      "router bgp 100",
      " neighbor 172.16.2.2 route-map RM-PREFER-30-IN in",
      "end",
  };
  EXPECT_EQ(update->script.commands, expected);
  EXPECT_EQ(EffectiveLocalPref(update->state, 100, 30), kPreferredLocalPref);
  absl::StatusOr<BgpPolicyState> applied =
      ApplyVtyshScript(EmitVtysh(update->script), f.topology, f.policy);
  ASSERT_TRUE(applied.ok()) << applied.status();
  EXPECT_EQ(*applied, update->state);
}

TEST(GenerateBgpUpdateTest, AlreadySatisfiedIsNoOp) {
  const BgpFixture f = Fixture();
  absl::StatusOr<BgpUpdate> update =
      GenerateBgpUpdate(f.topology, f.policy, {20, 200}, 100);
  ASSERT_TRUE(update.ok());
  EXPECT_FALSE(update->changed);
  EXPECT_EQ(update->state, f.policy);
  EXPECT_EQ(update->script.commands,
            (std::vector<std::string>{"configure terminal", "end"}));
}

TEST(GenerateBgpUpdateTest, ErrorCases) {
  const BgpFixture f = Fixture();
  EXPECT_EQ(GenerateBgpUpdate(f.topology, f.policy, {200, 30}, 100)
                .status()
                .code(),
            absl::StatusCode::kNotFound);
  EXPECT_EQ(
      GenerateBgpUpdate(f.topology, f.policy, {30, 200}, 999).status().code(),
      absl::StatusCode::kNotFound);
  // AS100 never offers AS200's prefix to its provider AS20.
  EXPECT_EQ(
      GenerateBgpUpdate(f.topology, f.policy, {100, 200}, 20).status().code(),
      absl::StatusCode::kFailedPrecondition);
}

TEST(ApplyVtyshScriptTest, RejectsUnsupportedInput) {
  const BgpFixture f = Fixture();
  EXPECT_FALSE(
      ApplyVtyshScript("configure terminal\n", f.topology, f.policy).ok());
  EXPECT_FALSE(ApplyVtyshScript(
                   "configure terminal\nrouter bgp 100\n neighbor 9.9.9.9 "
                   "route-map RM-BACKUP-30-IN in\nend\n",
                   f.topology, f.policy)
                   .ok());
  EXPECT_FALSE(ApplyVtyshScript("configure terminal\nshutdown everything\nend\n",
                                f.topology, f.policy)
                   .ok());
}

}  // namespace
}  // namespace netbuddy
