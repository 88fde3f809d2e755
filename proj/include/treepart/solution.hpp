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

// Shared result type of every tree partitioning method, its invariant
// checker and its JSON form.

#ifndef TREEPART_SOLUTION_HPP_
#define TREEPART_SOLUTION_HPP_

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "treepart/coherency.hpp"
#include "treepart/network.hpp"

namespace treepart {

enum class Method { kTwoStage, kMilp, kSsr, kOracle };

std::string_view method_name(Method m);  // "two-stage", "milp", "ssr", "oracle"
Method parse_method(std::string_view name);

struct TreePartitionSolution {
  Partition partition;
  std::vector<LineId> switched;          // sorted
  std::vector<LineId> retained_bridges;  // sorted, k-1 active cross edges
  double disruption_mw = 0.0;
  Method method = Method::kMilp;
  double runtime_s = 0.0;
};

// Sum of |flow_mw| over the given lines, accumulated in ascending id order
// so equal sets always give bit-identical sums.
double disruption(const Network& net, std::span<const LineId> switched);

// Fills retained_bridges = cross edges minus switched and disruption_mw.
// Does not validate; see solution_problems.
TreePartitionSolution make_solution(const Network& net, Partition partition,
                                    std::vector<LineId> switched, Method method);

// Human-readable list of violated invariants; empty when the solution is a
// valid coherency-respecting tree partition of net.
std::vector<std::string> solution_problems(const Network& net,
                                           const CoherencyGroups& groups,
                                           const TreePartitionSolution& sol);

// Throws InvariantViolation listing every problem.
void validate_solution(const Network& net, const CoherencyGroups& groups,
                       const TreePartitionSolution& sol);

// {method, k, clusters:[[bus ids]], switched:[[i,j]], bridges:[[i,j]],
//  disruption_mw, runtime_s}; runtime_s is omitted when include_timing is
// false.
nlohmann::json solution_to_json(const Network& net,
                                const TreePartitionSolution& sol,
                                bool include_timing = true);
TreePartitionSolution solution_from_json(const Network& net,
                                         const nlohmann::json& j);

// Tolerance used when comparing objective values for tie-breaking.
inline double objective_tie_tolerance(double value) {
  return 1e-9 * (value < 1.0 ? 1.0 : value);
}

}  // namespace treepart

#endif  // TREEPART_SOLUTION_HPP_
