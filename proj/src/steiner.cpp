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

#include "treepart/steiner.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <string>

#include "treepart/error.hpp"

namespace treepart {

SteinerTree steiner_tree(const Network& net, std::span<const int> terminals) {
  std::vector<int> terms(terminals.begin(), terminals.end());
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  if (terms.empty()) throw InvalidArgument("Steiner tree needs at least one terminal");
  if (static_cast<int>(terms.size()) > kMaxSteinerTerminals) {
    throw BudgetExceeded("Steiner tree with " + std::to_string(terms.size()) +
                         " terminals exceeds the exact limit of " +
                         std::to_string(kMaxSteinerTerminals) +
                         "; use a heuristic tree instead");
  }
  for (int t : terms) {
    if (t < 0 || t >= net.num_buses()) throw InvalidArgument("terminal out of range");
  }
  SteinerTree tree;
  tree.terminals = terms;
  if (terms.size() == 1) {
    tree.nodes = terms;
    return tree;
  }

  const int n = net.num_buses();
  const int root = terms.back();
  const int t = static_cast<int>(terms.size()) - 1;  // terminals besides root
  const int full = (1 << t) - 1;
  constexpr int kInf = std::numeric_limits<int>::max() / 4;
  // how >= 0: reached from neighbour `how`; -1: terminal base case;
  // <= -2: merge of subset A = -how - 2 and its complement.
  std::vector<int> cost(static_cast<std::size_t>(full + 1) * n, kInf);
  std::vector<int> how(static_cast<std::size_t>(full + 1) * n, -1);
  auto at = [n](int s, int v) { return static_cast<std::size_t>(s) * n + v; };

  using Item = std::pair<int, int>;
  for (int s = 1; s <= full; ++s) {
    if ((s & (s - 1)) == 0) {
      const int bit = std::countr_zero(static_cast<unsigned>(s));
      cost[at(s, terms[bit])] = 0;
      how[at(s, terms[bit])] = -1;
    } else {
      const int low = s & -s;
      // subsets containing the lowest bit, so each split is seen once
      for (int a = (s - 1) & s; a > 0; a = (a - 1) & s) {
        if (!(a & low)) continue;
        const int b = s ^ a;
        for (int v = 0; v < n; ++v) {
          const int c = cost[at(a, v)] + cost[at(b, v)];
          if (c < cost[at(s, v)]) {
            cost[at(s, v)] = c;
            how[at(s, v)] = -a - 2;
          }
        }
      }
    }
    // unit-weight relaxation along edges
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    for (int v = 0; v < n; ++v) {
      if (cost[at(s, v)] < kInf) queue.emplace(cost[at(s, v)], v);
    }
    while (!queue.empty()) {
      const auto [d, v] = queue.top();
      queue.pop();
      if (d != cost[at(s, v)]) continue;
      for (const Incidence& inc : net.neighbors(v)) {
        const int u = inc.neighbor;
        if (d + 1 < cost[at(s, u)]) {
          cost[at(s, u)] = d + 1;
          how[at(s, u)] = v;
          queue.emplace(d + 1, u);
        }
      }
    }
  }
  if (cost[at(full, root)] >= kInf) {
    throw InvalidArgument("terminals are not connected");
  }

  std::set<LineId> edges;
  std::set<int> nodes(terms.begin(), terms.end());
  std::vector<std::pair<int, int>> stack{{full, root}};
  while (!stack.empty()) {
    const auto [s, v] = stack.back();
    stack.pop_back();
    nodes.insert(v);
    const int h = how[at(s, v)];
    if (h == -1) continue;
    if (h >= 0) {
      edges.insert(net.lines()[*net.find_line(v, h)].id);
      stack.emplace_back(s, h);
    } else {
      const int a = -h - 2;
      stack.emplace_back(a, v);
      stack.emplace_back(s ^ a, v);
    }
  }
  if (static_cast<int>(edges.size()) != cost[at(full, root)] ||
      nodes.size() != edges.size() + 1) {
    throw InvariantViolation("Steiner reconstruction did not yield a tree");
  }
  tree.nodes.assign(nodes.begin(), nodes.end());
  tree.edges.assign(edges.begin(), edges.end());
  return tree;
}

std::vector<SteinerTree> steiner_trees(const Network& net,
                                       const CoherencyGroups& groups) {
  validate_groups(net, groups);
  std::vector<SteinerTree> out;
  out.reserve(groups.groups.size());
  for (const auto& g : groups.groups) out.push_back(steiner_tree(net, g));
  return out;
}

SteinerFixings build_fixings(const Network& net, std::span<const SteinerTree> trees) {
  std::map<int, int> bus_count;
  std::map<LineId, int> edge_count;
  for (const SteinerTree& t : trees) {
    for (int v : t.nodes) ++bus_count[v];
    for (LineId e : t.edges) ++edge_count[e];
  }
  std::set<int> dropped_bus;
  for (const auto& [v, c] : bus_count) {
    if (c >= 2) dropped_bus.insert(v);
  }
  std::set<LineId> dropped_edge;
  for (const auto& [e, c] : edge_count) {
    if (c >= 2) dropped_edge.insert(e);
  }
  for (int v : dropped_bus) {
    for (const Incidence& inc : net.neighbors(v)) {
      dropped_edge.insert(net.lines()[inc.line].id);
    }
  }

  SteinerFixings fix;
  for (int r = 0; r < static_cast<int>(trees.size()); ++r) {
    for (int v : trees[r].nodes) {
      if (!dropped_bus.count(v)) fix.bus_fix[v] = r;
    }
  }
  for (int r = 0; r < static_cast<int>(trees.size()); ++r) {
    for (LineId e : trees[r].edges) {
      if (dropped_edge.count(e)) continue;
      const Line& l = net.line(e);
      auto a = fix.bus_fix.find(l.from), b = fix.bus_fix.find(l.to);
      if (a != fix.bus_fix.end() && b != fix.bus_fix.end() && a->second == r &&
          b->second == r) {
        fix.edge_fix[e] = r;
      }
    }
  }
  return fix;
}

nlohmann::json steiner_to_json(const Network& net, const SteinerTree& tree) {
  nlohmann::json terminals = nlohmann::json::array();
  nlohmann::json nodes = nlohmann::json::array();
  nlohmann::json edges = nlohmann::json::array();
  for (int v : tree.terminals) terminals.push_back(net.bus(v).id);
  for (int v : tree.nodes) nodes.push_back(net.bus(v).id);
  for (LineId e : tree.edges) {
    const Line& l = net.line(e);
    edges.push_back({net.bus(l.from).id, net.bus(l.to).id});
  }
  return {{"terminals", terminals}, {"nodes", nodes}, {"edges", edges}};
}

}  // namespace treepart
