// Copyright 2026 The treepart Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "treepart/bnb.hpp"
#include "treepart/bridge.hpp"
#include "treepart/case_io.hpp"
#include "treepart/dcflow.hpp"
#include "treepart/dcopf.hpp"
#include "treepart/error.hpp"
#include "treepart/synth.hpp"

namespace treepart {
namespace {

using testing::make_network;

TEST(SolveDc, TwoBusSinglePath) {
  const Network net = make_network(2, {{0, 1, 0.0}}, {100.0, -100.0});
  const FlowSolution sol = solve_dc(net);
  EXPECT_NEAR(sol.flows_mw[0], 100.0, 1e-9);
  EXPECT_EQ(sol.theta[0], 0.0);
}

TEST(SolveDc, SymmetricTriangleSplitsTwoToOne) {
  const Network net = make_network(3, {{0, 1, 0}, {1, 2, 0}, {0, 2, 0}}, {100, -100, 0});
  const FlowSolution sol = solve_dc(net);
  EXPECT_NEAR(sol.flows_mw[*net.find_line(0, 1)], 200.0 / 3.0, 1e-9);
  EXPECT_NEAR(sol.flows_mw[*net.find_line(0, 2)], 100.0 / 3.0, 1e-9);
  EXPECT_NEAR(sol.flows_mw[*net.find_line(1, 2)], -100.0 / 3.0, 1e-9);
}

TEST(SolveDc, BalanceIdentityOnShippedCases) {
  for (const char* file : {"case_ieee30.m", "case118.m", "case300.m"}) {
    SCOPED_TRACE(file);
    const Network net = balanced_dispatch(load_network(testing::case_path(file)));
    const FlowSolution sol = solve_dc(net);
    EXPECT_LT(balance_residual_pu(net, sol), 1e-8);
    // Recompute injections from flows.
    std::vector<double> div(net.num_buses(), 0.0);
    for (int e = 0; e < net.num_lines(); ++e) {
      div[net.lines()[e].from] += sol.flows_mw[e];
      div[net.lines()[e].to] -= sol.flows_mw[e];
    }
    for (int i = 1; i < net.num_buses(); ++i) {
      EXPECT_NEAR(div[i], net.bus(i).injection_mw, 1e-6);
    }
  }
}

TEST(SolveDc, SlackChoiceOnlyShiftsAngles) {
  const Network net = balanced_dispatch(load_network(testing::case_path("case57.m")));
  const FlowSolution a = solve_dc(net, 0);
  const FlowSolution b = solve_dc(net, 17);
  EXPECT_LT((a.flows_mw - b.flows_mw).cwiseAbs().maxCoeff(), 1e-8);
  const Eigen::VectorXd shift = a.theta - b.theta;
  EXPECT_LT((shift.array() - shift[0]).abs().maxCoeff(), 1e-10);
}

TEST(SolveDc, DisconnectedIsSingular) {
  const Network net = make_network(4, {{0, 1, 0}, {2, 3, 0}}, {1, -1, 1, -1});
  EXPECT_THROW(solve_dc(net), SingularSystem);
}

TEST(Dispatch, BalancedDispatchMatchesLoad) {
  const Network net = balanced_dispatch(load_network(testing::case_path("case118.m")));
  double total = 0.0;
  for (const Bus& b : net.buses()) total += b.injection_mw;
  EXPECT_NEAR(total, 0.0, 1e-8);
}

TEST(Disruption, Examples) {
  const Network net = make_network(3, {{0, 1, -50.0}, {1, 2, 20.0}});
  EXPECT_EQ(disruption(net, {}), 0.0);
  const LineId one[] = {0};
  EXPECT_DOUBLE_EQ(disruption(net, one), 50.0);
  const LineId both[] = {1, 0};
  EXPECT_DOUBLE_EQ(disruption(net, both), 70.0);
}

TEST(Localization, InternalFailureStaysInsideCluster) {
  std::mt19937_64 rng(21);
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Network net = random_network({14, 22, rng(), true});
    const CoherencyGroups groups = random_groups(net, 3, 2, rng());
    TreePartitionSolution sol;
    try {
      sol = solve_builtin(net, groups).first;
    } catch (const InfeasibleError&) {
      continue;  // some random groupings admit no tree partition
    }
    for (const Line& l : net.lines()) {
      if (sol.partition.assignment[l.from] != sol.partition.assignment[l.to]) continue;
      const LocalizationReport rep = check_localization(net, sol, l.id, 1e-6);
      if (rep.outcome == Localization::kIslanding) continue;
      EXPECT_EQ(rep.outcome, Localization::kLocalized);
      EXPECT_LT(rep.max_outside_delta_mw, 1e-6);
      ++checked;
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(Localization, RetainedBridgeIslands) {
  const Network net = testing::toy_cycle();
  const auto groups = testing::groups_of({{0}, {2}});
  const auto [sol, stats] = solve_builtin(net, groups);
  ASSERT_EQ(sol.retained_bridges.size(), 1u);
  const Network switched = apply_switching(net, sol.switched);
  const LocalizationReport rep =
      localization_delta(switched, sol.partition, sol.retained_bridges[0]);
  EXPECT_EQ(rep.outcome, Localization::kIslanding);
}

TEST(Localization, MeshedNonTreePartitionPropagates) {
  // 6-bus ring with two chords, split into halves joined by three lines.
  const Network base = make_network(
      6, {{0, 1, 0}, {1, 2, 0}, {2, 3, 0}, {3, 4, 0}, {4, 5, 0}, {5, 0, 0}, {0, 3, 0}, {1, 4, 0}},
      {60, -20, 10, -30, 15, -35});
  const Network net = with_dc_flows(base);
  const Partition p = make_partition({0, 0, 0, 1, 1, 1}, 2);
  const LocalizationReport rep = localization_delta(net, p, *net.find_line(0, 1) /* pos == id */);
  EXPECT_EQ(rep.outcome, Localization::kPropagated);
  EXPECT_GT(rep.max_outside_delta_mw, 1.0);
}

TEST(Localization, NonBridgeCrossEdgeIsRejected) {
  const Network net = testing::toy_cycle();
  EXPECT_THROW(localization_delta(net, make_partition({0, 0, 1, 1}, 2), 1), InvalidArgument);
}

// Three-bus network with generator records for the dispatch tests.
Network opf_network(std::vector<Generator> gens, std::vector<double> loads,
                    std::vector<std::tuple<int, int, double>> edges,
                    std::vector<std::optional<double>> ratings = {}) {
  const int n = static_cast<int>(loads.size());
  std::vector<Bus> buses(n);
  for (int i = 0; i < n; ++i) buses[i] = {i + 1, i, -loads[i], loads[i], false};
  for (const Generator& g : gens) buses[g.bus].is_generator = true;
  std::vector<Line> lines;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    Line l;
    l.id = static_cast<LineId>(e);
    l.from = std::get<0>(edges[e]);
    l.to = std::get<1>(edges[e]);
    l.susceptance = std::get<2>(edges[e]);
    if (e < ratings.size()) l.capacity_mw = ratings[e];
    lines.push_back(l);
  }
  return Network(buses, lines, 100.0, gens);
}

class DcOpf : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!testing::highs_available()) GTEST_SKIP() << "highspy not installed";
    bridge_.command = testing::highs_bridge_command();
    bridge_.timeout_s = 60;
  }
  SolverBridge bridge_;
};

TEST_F(DcOpf, SingleGeneratorDispatchIsForced) {
  const Network net = opf_network({{0, 0, 0, 200, 10}}, {0, 100}, {{0, 1, 10}});
  const OpfResult r = solve_dcopf_via_bridge(net, bridge_);
  EXPECT_NEAR(r.dispatch_mw[0], 100.0, 1e-6);
  const Network forced = with_injections(net, std::vector<double>{100.0, -100.0});
  EXPECT_NEAR(r.flows.flows_mw[0], solve_dc(forced).flows_mw[0], 1e-6);
  EXPECT_NEAR(r.network.lines()[0].flow_mw, 100.0, 1e-6);
}

TEST_F(DcOpf, CheapGeneratorTakesAllLoad) {
  const Network net = opf_network({{0, 0, 0, 200, 10}, {2, 0, 0, 200, 30}}, {0, 100, 0},
                                  {{0, 1, 10}, {1, 2, 10}, {0, 2, 10}});
  const OpfResult r = solve_dcopf_via_bridge(net, bridge_);
  EXPECT_NEAR(r.dispatch_mw[0], 100.0, 1e-6);
  EXPECT_NEAR(r.dispatch_mw[1], 0.0, 1e-6);
  EXPECT_NEAR(r.cost, 1000.0, 1e-4);
}

TEST_F(DcOpf, BindingRatingMatchesHandSolvedVertex) {
  // Equal susceptances: flow 1->3 = 50 + a/3 for cheap output a, so a
  // rating of 80 MW caps a at 90 and the dearer unit supplies 60.
  const Network net = opf_network({{0, 0, 0, 300, 10}, {1, 0, 0, 300, 20}}, {0, 0, 150},
                                  {{0, 1, 10}, {1, 2, 10}, {0, 2, 10}},
                                  {std::nullopt, std::nullopt, 80.0});
  const OpfResult r = solve_dcopf_via_bridge(net, bridge_);
  EXPECT_NEAR(r.dispatch_mw[0], 90.0, 1e-5);
  EXPECT_NEAR(r.dispatch_mw[1], 60.0, 1e-5);
  EXPECT_NEAR(r.cost, 2100.0, 1e-3);
  EXPECT_NEAR(r.flows.flows_mw[2], 80.0, 1e-5);
}

TEST_F(DcOpf, InfeasibleLoadIsReported) {
  const Network net = opf_network({{0, 0, 0, 50, 10}}, {0, 100}, {{0, 1, 10}});
  try {
    solve_dcopf_via_bridge(net, bridge_);
    FAIL() << "expected infeasibility";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.reason(), SolverError::Reason::kInfeasible);
  }
}

TEST(DcOpfNoBridge, MissingConfigurationIsUnsupported) {
  ::unsetenv(kSolverCommandEnv);
  EXPECT_THROW(bridge_from_env(), UnsupportedOperation);
}

}  // namespace
}  // namespace treepart
