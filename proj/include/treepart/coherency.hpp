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

// Coherent generator groups and their slow-coherency identification.

#ifndef TREEPART_COHERENCY_HPP_
#define TREEPART_COHERENCY_HPP_

#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "treepart/network.hpp"

namespace treepart {

// k disjoint non-empty bus sets that must end up in clusters 0..k-1
// respectively. Members are bus indices, sorted ascending.
struct CoherencyGroups {
  std::vector<std::vector<int>> groups;
  std::vector<double> inertia_h;  // per generator bus used, may be empty

  int k() const { return static_cast<int>(groups.size()); }
};

// Throws InvalidArgument unless groups are non-empty, disjoint and in range.
// With require_generators, every member must also be a generator bus.
void validate_groups(const Network& net, const CoherencyGroups& groups,
                     bool require_generators = false);

// Cluster label fixed by the groups for every bus, -1 where free.
std::vector<int> group_labels(const Network& net, const CoherencyGroups& groups);

// Susceptance-weighted Laplacian over all buses.
Eigen::MatrixXd susceptance_laplacian(const Network& net);

// Kron reduction of a Laplacian onto `keep`:
// L_kk - L_ke L_ee^{-1} L_ek. Rows/columns follow the order of `keep`.
Eigen::MatrixXd kron_reduce(const Eigen::MatrixXd& laplacian,
                            const std::vector<int>& keep);

struct KMeansResult {
  std::vector<int> labels;
  int iterations = 0;
};

// Lloyd's algorithm from the given initial centroids. Rows listed in
// `pinned` (row -> cluster, -1 free) never move and always contribute to
// their cluster's centroid. Ties go to the lowest cluster index; an emptied
// cluster is reseeded with the free row farthest from its centroid.
// Throws BudgetExceeded if max_iterations is reached.
KMeansResult kmeans(const Eigen::MatrixXd& rows, Eigen::MatrixXd centroids,
                    const std::vector<int>& pinned, int max_iterations = 300);

// Farthest-first seed rows: the pair at maximal distance, then repeatedly
// the row farthest from all chosen seeds. Ties resolve to lower row indices.
std::vector<int> farthest_first_seeds(const Eigen::MatrixXd& rows, int k);

// Slow-coherency grouping: Kron-reduce the susceptance Laplacian onto the
// generator buses, scale by inverse inertia, take the k slowest modes and
// cluster generator rows with farthest-first seeded k-means. inertia_h
// defaults to 1 for every generator. Groups are ordered by lowest member.
CoherencyGroups slow_coherency(const Network& net, int k,
                               std::vector<double> inertia_h = {});

// {k, groups: [[bus ids]]} with external bus ids.
nlohmann::json groups_to_json(const Network& net, const CoherencyGroups& groups);
CoherencyGroups groups_from_json(const Network& net, const nlohmann::json& j);

}  // namespace treepart

#endif  // TREEPART_COHERENCY_HPP_
