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

// Hands a MilpModel to an external solver process and reads its answer.
//
// The solver is any shell command built from a template such as
//   python3 highs_bridge.py {model} {solution} {timeout} {gap}
// The model is written in CPLEX-LP form; the solver writes one
// `name value` pair per line to the solution path, optionally preceded by
// a `# status <word>` comment. Unknown names are ignored and missing
// variables read as zero.

#ifndef TREEPART_BRIDGE_HPP_
#define TREEPART_BRIDGE_HPP_

#include <string>
#include <vector>

#include "treepart/coherency.hpp"
#include "treepart/milp.hpp"
#include "treepart/network.hpp"
#include "treepart/solution.hpp"
#include "treepart/steiner.hpp"

namespace treepart {

inline constexpr const char* kSolverCommandEnv = "TREEPART_SOLVER_CMD";

struct SolverBridge {
  std::string command;     // must contain {model} and {solution}
  double timeout_s = 600.0;
  double gap = 0.0;        // relative optimality gap handed to the solver
};

// Throws InvalidArgument when a placeholder is missing or the limits are
// not positive.
void check_bridge(const SolverBridge& bridge);

// Bridge configured from TREEPART_SOLVER_CMD. Throws UnsupportedOperation
// when the variable is unset or empty.
SolverBridge bridge_from_env();

struct BridgeResult {
  std::string status;          // "optimal", "time_limit", ...; "" if absent
  std::vector<double> values;  // one per model variable
  double wall_s = 0.0;
};

// Exports, runs and reads back. Throws SolverError for a nonzero exit,
// a timeout, an infeasible status or an unreadable solution file.
BridgeResult run_bridge(const MilpModel& model, const SolverBridge& bridge);

// Solves the tree partitioning model through the bridge. The answer is
// checked against every model constraint and every solution invariant
// before it is returned; a violation raises InvariantViolation.
TreePartitionSolution solve_via_bridge(const Network& net,
                                       const CoherencyGroups& groups,
                                       const SteinerFixings* ssr,
                                       const SolverBridge& bridge);

}  // namespace treepart

#endif  // TREEPART_BRIDGE_HPP_
