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

// Linear-cost DC optimal dispatch solved through the external solver
// bridge. Optional: the default pipeline uses case-file dispatch.

#ifndef TREEPART_DCOPF_HPP_
#define TREEPART_DCOPF_HPP_

#include <span>
#include <vector>

#include "treepart/bridge.hpp"
#include "treepart/dcflow.hpp"
#include "treepart/milp.hpp"
#include "treepart/network.hpp"

namespace treepart {

struct OpfResult {
  FlowSolution flows;
  std::vector<double> dispatch_mw;  // per generator record
  double cost = 0.0;
  Network network;  // injections and flows set from the dispatch
};

// LP over generator outputs pg_g in [pmin, pmax] and bus angles th_i
// (slack fixed at 0): minimize sum cost_g pg_g subject to nodal balance and
// |flow| <= rating on rated lines. `cost` overrides the case costs when not
// empty (one entry per generator record).
MilpModel build_dcopf_model(const Network& net, std::span<const double> cost = {},
                            int slack = 0);

// Throws InvalidArgument for a network without generators, SolverError
// (kInfeasible) when the dispatch cannot meet load.
OpfResult solve_dcopf_via_bridge(const Network& net, const SolverBridge& bridge,
                                 std::span<const double> cost = {}, int slack = 0);

}  // namespace treepart

#endif  // TREEPART_DCOPF_HPP_
