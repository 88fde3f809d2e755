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

#include "treepart/oracle.hpp"

#include <chrono>
#include <limits>
#include <vector>

#include "treepart/error.hpp"
#include "treepart/twostage.hpp"

namespace treepart {

TreePartitionSolution enumerate_optimal(const Network& net,
                                        const CoherencyGroups& groups,
                                        std::int64_t limit) {
  const auto start = std::chrono::steady_clock::now();
  validate_groups(net, groups);
  const int n = net.num_buses();
  const int k = groups.k();
  const std::vector<int> fixed = group_labels(net, groups);

  std::vector<int> free_buses;
  for (int i = 0; i < n; ++i) {
    if (fixed[i] < 0) free_buses.push_back(i);
  }
  std::int64_t total = 1;
  for (std::size_t j = 0; j < free_buses.size(); ++j) {
    if (total > limit / k) {
      throw BudgetExceeded(std::to_string(k) + "^" + std::to_string(free_buses.size()) +
                           " assignments exceed the oracle limit of " +
                           std::to_string(limit));
    }
    total *= k;
  }

  std::vector<int> assignment = fixed;
  std::vector<int> best;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<int> digits(free_buses.size(), 0);
  for (std::int64_t count = 0; count < total; ++count) {
    for (std::size_t j = 0; j < free_buses.size(); ++j) {
      assignment[free_buses[j]] = digits[j];
    }
    std::vector<int> size(k, 0);
    for (int c : assignment) ++size[c];
    bool nonempty = true;
    for (int s : size) nonempty = nonempty && s > 0;
    if (nonempty) {
      const Partition p{assignment, k};
      if (clusters_connected(net, p)) {
        const ReducedGraph rg = reduced_graph(net, p);
        if (is_connected(rg)) {
          const double value = disruption(net, max_weight_spanning_tree(rg).switched);
          if (best.empty() || value < best_value - objective_tie_tolerance(best_value)) {
            best = assignment;
            best_value = value;
          }
        }
      }
    }
    // Odometer increment, last free bus least significant.
    for (int j = static_cast<int>(digits.size()) - 1; j >= 0; --j) {
      if (++digits[j] < k) break;
      digits[j] = 0;
    }
  }
  if (best.empty()) {
    throw InfeasibleError("no assignment gives a coherency-respecting tree partition");
  }
  Partition p = make_partition(best, k);
  SpanningTreeSplit split = max_weight_spanning_tree(reduced_graph(net, p));
  TreePartitionSolution sol =
      make_solution(net, std::move(p), std::move(split.switched), Method::kOracle);
  validate_solution(net, groups, sol);
  sol.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

}  // namespace treepart
