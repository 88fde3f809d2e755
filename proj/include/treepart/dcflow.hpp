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

// DC power flow, default dispatch and the failure-localization checker.

#ifndef TREEPART_DCFLOW_HPP_
#define TREEPART_DCFLOW_HPP_

#include <Eigen/Dense>
#include <json.hpp>

#include "treepart/network.hpp"
#include "treepart/solution.hpp"

namespace treepart {

struct FlowSolution {
  Eigen::VectorXd theta;     // radians, theta[slack] = 0
  Eigen::VectorXd flows_mw;  // per line position, positive from -> to
  int slack_bus = 0;
};

// Solves B theta = p with the slack row and column removed, using a sparse
// LDL^T factorization. Net imbalance is absorbed at the slack bus.
// Throws SingularSystem when the network is disconnected.
FlowSolution solve_dc(const Network& net, int slack = 0);

// Largest per-unit mismatch between injections and flow divergence over the
// non-slack buses.
double balance_residual_pu(const Network& net, const FlowSolution& sol);

// Rescales every generator's Pg by one factor so that generation equals
// load, then recomputes bus injections. Networks without generator records
// are returned unchanged.
Network balanced_dispatch(const Network& net);

// net with flow_mw taken from solve_dc.
Network with_dc_flows(const Network& net, int slack = 0);

nlohmann::json flows_to_json(const Network& net, const FlowSolution& sol);

enum class Localization { kLocalized, kPropagated, kIslanding };

struct LocalizationReport {
  Localization outcome = Localization::kIslanding;
  int cluster = -1;
  double max_outside_delta_mw = 0.0;
};

// Removes `line` from `network` and compares DC flows before and after on
// every line not internal to the line's cluster. `network` is taken as is
// (typically already switched). Removal that disconnects gives kIslanding.
// Throws InvalidArgument if the line is a non-bridge cross edge.
LocalizationReport localization_delta(const Network& network,
                                      const Partition& partition, LineId line,
                                      double tol = 1e-6, int slack = 0);

// localization_delta on the post-switching network of `sol`.
LocalizationReport check_localization(const Network& net,
                                      const TreePartitionSolution& sol,
                                      LineId line, double tol = 1e-6);

}  // namespace treepart

#endif  // TREEPART_DCFLOW_HPP_
