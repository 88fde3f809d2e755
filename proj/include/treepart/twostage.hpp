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

// Two-stage baseline: constrained spectral clustering followed by a
// maximum-weight spanning tree on the reduced multigraph.

#ifndef TREEPART_TWOSTAGE_HPP_
#define TREEPART_TWOSTAGE_HPP_

#include <vector>

#include "treepart/coherency.hpp"
#include "treepart/network.hpp"
#include "treepart/solution.hpp"

namespace treepart {

struct SpanningTreeSplit {
  std::vector<LineId> retained;  // k-1 edges forming a spanning tree
  std::vector<LineId> switched;  // every other reduced edge
};

// Prim's algorithm on the reduced multigraph, maximizing retained |flow|.
// Equal weights go to the lower line id. The switched set then has minimum
// weight over all spanning-tree choices. Throws InfeasibleError if rg is
// disconnected.
SpanningTreeSplit max_weight_spanning_tree(const ReducedGraph& rg);

// Stage one. Each coherent group is contracted into a supernode, buses are
// embedded with the k smallest eigenvectors of the |f|-weighted normalized
// Laplacian and grouped by k-means seeded at (and pinned to) the
// supernodes. Clusters are then repaired to be connected: a group split
// across components pulls in a shortest connecting path, and a stray
// component moves to the neighbouring cluster it is most heavily attached
// to. Throws InfeasibleError when repair cannot reach k connected clusters.
Partition constrained_spectral_partition(const Network& net,
                                         const CoherencyGroups& groups);

// Both stages; the result is validated before it is returned.
TreePartitionSolution two_stage(const Network& net, const CoherencyGroups& groups);

}  // namespace treepart

#endif  // TREEPART_TWOSTAGE_HPP_
