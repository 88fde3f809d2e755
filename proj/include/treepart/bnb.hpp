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

// Exact combinatorial branch-and-bound for the tree partitioning problem.
//
// The search assigns buses to clusters depth first. Pruning relies on two
// facts. First, a cluster component with no unassigned neighbour can never
// grow, so it must already be the whole cluster. Second, the final
// objective (cross weight minus a maximum spanning tree of the reduced
// multigraph) never decreases when a cross edge is added, which makes the
// value of the already-forced cross edges alone a valid lower bound.

#ifndef TREEPART_BNB_HPP_
#define TREEPART_BNB_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <utility>

#include "treepart/coherency.hpp"
#include "treepart/network.hpp"
#include "treepart/solution.hpp"
#include "treepart/steiner.hpp"

namespace treepart {

struct BnBStats {
  std::int64_t nodes = 0;
  double best_bound = 0.0;
  double incumbent = 0.0;
  bool proven_optimal = false;
  double wall_s = 0.0;
};

struct BnBOptions {
  std::int64_t node_limit = std::int64_t{1} << 40;
  double time_limit_s = 3600.0;
  // Seed the incumbent with the two-stage heuristic when it respects every
  // fixing. Off by default so node counts measure the search alone.
  bool warm_start = false;
  // Called at every node with the partial assignment (-1 = free) and the
  // lower bound computed there.
  std::function<void(std::span<const int>, double)> observer;
};

// Optimal tree partition respecting the coherency groups and, when given,
// the Steiner fixings. Among equal objectives (within
// objective_tie_tolerance) the lexicographically smallest assignment
// vector wins. When a limit stops the search the best solution found is
// returned with proven_optimal = false; BudgetExceeded is thrown if none
// was found yet, InfeasibleError if the search completes without one.
std::pair<TreePartitionSolution, BnBStats> solve_builtin(
    const Network& net, const CoherencyGroups& groups,
    const SteinerFixings* ssr = nullptr, const BnBOptions& options = {});

}  // namespace treepart

#endif  // TREEPART_BNB_HPP_
