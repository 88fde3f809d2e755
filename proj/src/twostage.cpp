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

#include "treepart/twostage.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>

#include <Eigen/Dense>

#include "treepart/error.hpp"

namespace treepart {
namespace {

// Component id per bus of the subgraph induced by each bus's own cluster.
std::vector<int> cluster_components(const Network& net,
                                    const std::vector<int>& assignment,
                                    int* count) {
  const int n = net.num_buses();
  std::vector<int> comp(n, -1);
  std::vector<int> stack;
  int next = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (const Incidence& inc : net.neighbors(v)) {
        const int u = inc.neighbor;
        if (comp[u] < 0 && assignment[u] == assignment[v]) {
          comp[u] = next;
          stack.push_back(u);
        }
      }
    }
    ++next;
  }
  *count = next;
  return comp;
}

// One repair step. Returns false when every cluster is connected.
bool repair_step(const Network& net, const CoherencyGroups& groups,
                 const std::vector<int>& fixed, std::vector<int>& assignment) {
  const int n = net.num_buses();
  const int k = groups.k();
  int count = 0;
  const std::vector<int> comp = cluster_components(net, assignment, &count);
  std::vector<int> main_comp(k);
  for (int r = 0; r < k; ++r) main_comp[r] = comp[groups.groups[r].front()];

  // A group whose members ended up in different components.
  for (int r = 0; r < k; ++r) {
    for (int g : groups.groups[r]) {
      if (comp[g] == main_comp[r]) continue;
      // BFS from the main component to g through buses not fixed elsewhere
      std::vector<int> parent(n, -2);
      std::deque<int> queue;
      for (int i = 0; i < n; ++i) {
        if (comp[i] == main_comp[r]) {
          parent[i] = -1;
          queue.push_back(i);
        }
      }
      while (!queue.empty() && parent[g] == -2) {
        const int v = queue.front();
        queue.pop_front();
        for (const Incidence& inc : net.neighbors(v)) {
          const int u = inc.neighbor;
          if (parent[u] != -2) continue;
          if (fixed[u] >= 0 && fixed[u] != r) continue;
          parent[u] = v;
          queue.push_back(u);
        }
      }
      if (parent[g] == -2) {
        throw InfeasibleError("two-stage: coherent group " +
                              std::to_string(r + 1) +
                              " cannot be connected inside its cluster");
      }
      for (int v = g; v >= 0 && parent[v] != -1; v = parent[v]) assignment[v] = r;
      return true;
    }
  }

  // Stray components: those not holding their cluster's group.
  std::vector<char> is_main(count, 0);
  for (int r = 0; r < k; ++r) is_main[main_comp[r]] = 1;
  for (int s = 0; s < n; ++s) {
    const int c = comp[s];
    if (is_main[c]) continue;
    const int r = assignment[s];
    std::vector<double> weight(k, 0.0);
    std::vector<char> touches_main(k, 0), touches(k, 0);
    for (int v = 0; v < n; ++v) {
      if (comp[v] != c) continue;
      for (const Incidence& inc : net.neighbors(v)) {
        const int u = inc.neighbor;
        const int cu = assignment[u];
        if (cu == r) continue;
        weight[cu] += std::abs(net.lines()[inc.line].flow_mw);
        touches[cu] = 1;
        if (comp[u] == main_comp[cu]) touches_main[cu] = 1;
      }
    }
    int target = -1;
    for (int pass = 0; pass < 2 && target < 0; ++pass) {
      for (int q = 0; q < k; ++q) {
        const bool eligible = pass == 0 ? touches_main[q] : touches[q];
        if (eligible && (target < 0 || weight[q] > weight[target])) target = q;
      }
    }
    if (target < 0) {
      throw InfeasibleError("two-stage: stray component has no neighbouring cluster");
    }
    for (int v = 0; v < n; ++v) {
      if (comp[v] == c) assignment[v] = target;
    }
    return true;
  }
  return false;
}

}  // namespace

SpanningTreeSplit max_weight_spanning_tree(const ReducedGraph& rg) {
  SpanningTreeSplit out;
  if (rg.k <= 0) return out;
  std::vector<char> in_tree(rg.k, 0);
  std::vector<char> used(rg.edges.size(), 0);
  in_tree[0] = 1;
  for (int step = 1; step < rg.k; ++step) {
    int best = -1;
    for (int e = 0; e < static_cast<int>(rg.edges.size()); ++e) {
      const ReducedEdge& edge = rg.edges[e];
      if (in_tree[edge.cluster_a] == in_tree[edge.cluster_b]) continue;
      if (best < 0 || edge.weight > rg.edges[best].weight ||
          (edge.weight == rg.edges[best].weight &&
           edge.line < rg.edges[best].line)) {
        best = e;
      }
    }
    if (best < 0) {
      throw InfeasibleError("reduced graph is disconnected; no spanning tree");
    }
    used[best] = 1;
    in_tree[rg.edges[best].cluster_a] = 1;
    in_tree[rg.edges[best].cluster_b] = 1;
    out.retained.push_back(rg.edges[best].line);
  }
  for (std::size_t e = 0; e < rg.edges.size(); ++e) {
    if (!used[e]) out.switched.push_back(rg.edges[e].line);
  }
  std::sort(out.retained.begin(), out.retained.end());
  std::sort(out.switched.begin(), out.switched.end());
  return out;
}

Partition constrained_spectral_partition(const Network& net,
                                         const CoherencyGroups& groups) {
  const int k = groups.k();
  if (k < 1) throw InvalidArgument("two-stage needs at least one coherent group");
  const std::vector<int> fixed = group_labels(net, groups);
  const int n = net.num_buses();

  // supernodes take node ids 0..k-1, free buses follow in bus order
  std::vector<int> node_of(n);
  int nodes = k;
  for (int i = 0; i < n; ++i) node_of[i] = fixed[i] >= 0 ? fixed[i] : nodes++;

  std::vector<int> assignment(n, -1);
  if (nodes == k) {
    return make_partition(fixed, k);
  }

  double max_flow = 0.0;
  for (const Line& l : net.lines()) max_flow = std::max(max_flow, std::abs(l.flow_mw));
  // keeps zero-flow lines in the graph so every node has positive degree
  const double floor_weight = 1e-6 * std::max(1.0, max_flow);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(nodes, nodes);
  for (const Line& l : net.lines()) {
    const int a = node_of[l.from], b = node_of[l.to];
    if (a == b) continue;
    const double weight = std::abs(l.flow_mw) + floor_weight;
    w(a, b) += weight;
    w(b, a) += weight;
  }
  const Eigen::VectorXd inv_sqrt_d = w.rowwise().sum().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(nodes, nodes) -
                        inv_sqrt_d.asDiagonal() * w * inv_sqrt_d.asDiagonal();
  lap = 0.5 * (lap + lap.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::kSingular, "spectral embedding: eigen-solve failed");
  }
  Eigen::MatrixXd embed = eig.eigenvectors().leftCols(k);
  for (int c = 0; c < k; ++c) {
    Eigen::Index arg = 0;
    embed.col(c).cwiseAbs().maxCoeff(&arg);
    if (embed(arg, c) < 0) embed.col(c) *= -1.0;
  }
  for (int i = 0; i < nodes; ++i) {
    const double norm = embed.row(i).norm();
    if (norm > 0) embed.row(i) /= norm;
  }
  std::vector<int> pinned(nodes, -1);
  for (int r = 0; r < k; ++r) pinned[r] = r;
  const KMeansResult km = kmeans(embed, embed.topRows(k), pinned);

  for (int i = 0; i < n; ++i) assignment[i] = km.labels[node_of[i]];

  const int max_steps = 4 * n + 16;
  int steps = 0;
  while (repair_step(net, groups, fixed, assignment)) {
    if (++steps > max_steps) {
      throw InfeasibleError("two-stage: connectivity repair did not converge");
    }
  }
  for (int i = 0; i < n; ++i) {
    if (fixed[i] >= 0 && assignment[i] != fixed[i]) {
      throw InfeasibleError("two-stage: repair moved a coherent generator");
    }
  }
  try {
    Partition p = make_partition(assignment, k);
    if (!clusters_connected(net, p)) {
      throw InfeasibleError("two-stage: clusters are not connected after repair");
    }
    return p;
  } catch (const InvalidArgument& e) {
    throw InfeasibleError(std::string("two-stage: ") + e.what());
  }
}

TreePartitionSolution two_stage(const Network& net, const CoherencyGroups& groups) {
  const auto start = std::chrono::steady_clock::now();
  Partition p = constrained_spectral_partition(net, groups);
  const SpanningTreeSplit split = max_weight_spanning_tree(reduced_graph(net, p));
  TreePartitionSolution sol =
      make_solution(net, std::move(p), split.switched, Method::kTwoStage);
  sol.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                start)
                      .count();
  validate_solution(net, groups, sol);
  return sol;
}

}  // namespace treepart
