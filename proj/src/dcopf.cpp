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

#include "treepart/dcopf.hpp"

#include <limits>
#include <string>

#include "treepart/error.hpp"

namespace treepart {

MilpModel build_dcopf_model(const Network& net, std::span<const double> cost,
                            int slack) {
  const auto gens = net.generators();
  if (gens.empty()) throw InvalidArgument("network has no generator records");
  if (!cost.empty() && cost.size() != gens.size()) {
    throw InvalidArgument("cost vector needs one entry per generator");
  }
  if (slack < 0 || slack >= net.num_buses()) throw InvalidArgument("slack out of range");
  constexpr double kInf = std::numeric_limits<double>::infinity();

  MilpModel model;
  std::vector<int> pg(gens.size());
  for (std::size_t g = 0; g < gens.size(); ++g) {
    pg[g] = model.add_variable("pg_" + std::to_string(g + 1), VarKind::kContinuous,
                               gens[g].pmin_mw, gens[g].pmax_mw);
    const double c = cost.empty() ? gens[g].cost_per_mwh : cost[g];
    model.objective.push_back({pg[g], c});
  }
  std::vector<int> th(net.num_buses());
  for (int i = 0; i < net.num_buses(); ++i) {
    const double bound = i == slack ? 0.0 : kInf;
    th[i] = model.add_variable("th_" + std::to_string(net.bus(i).id),
                               VarKind::kContinuous, -bound, bound);
  }

  std::vector<std::vector<Term>> rows(net.num_buses());
  for (std::size_t g = 0; g < gens.size(); ++g) rows[gens[g].bus].push_back({pg[g], 1.0});
  for (const Line& l : net.lines()) {
    const double K = net.base_mva() * l.susceptance;
    rows[l.from].push_back({th[l.from], -K});
    rows[l.from].push_back({th[l.to], K});
    rows[l.to].push_back({th[l.from], K});
    rows[l.to].push_back({th[l.to], -K});
    if (l.capacity_mw) {
      const std::string tag =
          std::to_string(net.bus(l.from).id) + "_" + std::to_string(net.bus(l.to).id);
      model.add_constraint("ratehi_" + tag, {{th[l.from], K}, {th[l.to], -K}},
                           Sense::kLessEqual, *l.capacity_mw);
      model.add_constraint("ratelo_" + tag, {{th[l.from], K}, {th[l.to], -K}},
                           Sense::kGreaterEqual, -*l.capacity_mw);
    }
  }
  for (int i = 0; i < net.num_buses(); ++i) {
    model.add_constraint("bal_" + std::to_string(net.bus(i).id), std::move(rows[i]),
                         Sense::kEqual, net.bus(i).load_mw);
  }
  return model;
}

OpfResult solve_dcopf_via_bridge(const Network& net, const SolverBridge& bridge,
                                 std::span<const double> cost, int slack) {
  const MilpModel model = build_dcopf_model(net, cost, slack);
  const BridgeResult res = run_bridge(model, bridge);
  const auto bad = violated_constraints(model, res.values, 1e-5);
  if (!bad.empty()) {
    throw InvariantViolation("dispatch violates " + bad.front());
  }
  OpfResult out;
  const auto gens = net.generators();
  std::vector<double> injection(net.num_buses(), 0.0);
  for (int i = 0; i < net.num_buses(); ++i) injection[i] = -net.bus(i).load_mw;
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const double p = res.values[model.find_variable("pg_" + std::to_string(g + 1))];
    out.dispatch_mw.push_back(p);
    injection[gens[g].bus] += p;
  }
  out.cost = model.objective_value(res.values);
  const Network dispatched = with_injections(net, injection);
  out.flows = solve_dc(dispatched, slack);
  std::vector<double> flows(out.flows.flows_mw.data(),
                            out.flows.flows_mw.data() + out.flows.flows_mw.size());
  out.network = with_flows(dispatched, flows);
  return out;
}

}  // namespace treepart
