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

// Minimum-edge Steiner trees per coherent group and the conflict-free
// cluster fixings derived from them.

#ifndef TREEPART_STEINER_HPP_
#define TREEPART_STEINER_HPP_

#include <map>
#include <span>
#include <vector>

#include <json.hpp>

#include "treepart/coherency.hpp"
#include "treepart/network.hpp"

namespace treepart {

struct SteinerTree {
  std::vector<int> terminals;  // bus indices, sorted
  std::vector<int> nodes;      // bus indices, sorted
  std::vector<LineId> edges;   // sorted
};

// bus -> cluster and line -> cluster assignments forced on a solver.
struct SteinerFixings {
  std::map<int, int> bus_fix;
  std::map<LineId, int> edge_fix;
};

inline constexpr int kMaxSteinerTerminals = 14;

// Exact minimum-edge Steiner tree by Dreyfus-Wagner dynamic programming over
// terminal subsets (unit edge weights). Throws BudgetExceeded for more than
// kMaxSteinerTerminals terminals and InvalidArgument for an empty set.
SteinerTree steiner_tree(const Network& net, std::span<const int> terminals);

// One tree per coherent group, in group order.
std::vector<SteinerTree> steiner_trees(const Network& net,
                                       const CoherencyGroups& groups);

// Tree r fixes its buses and lines to cluster r. A bus in two or more trees
// is dropped, as is a line in two or more trees and every line incident to
// a dropped bus (in all trees). A line stays fixed only while both of its
// endpoints remain fixed to the same cluster.
SteinerFixings build_fixings(const Network& net, std::span<const SteinerTree> trees);

// {terminals:[...], nodes:[...], edges:[[i,j]]} with external bus ids.
nlohmann::json steiner_to_json(const Network& net, const SteinerTree& tree);

}  // namespace treepart

#endif  // TREEPART_STEINER_HPP_
