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

#include "treepart/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "treepart/error.hpp"

namespace treepart {

Network::Network(std::vector<Bus> buses, std::vector<Line> lines,
                 double base_mva, std::vector<Generator> generators)
    : buses_(std::move(buses)),
      lines_(std::move(lines)),
      generators_(std::move(generators)),
      base_mva_(base_mva) {
  if (!(base_mva_ > 0.0)) {
    throw ValidationError("base_mva must be positive");
  }
  const int n = num_buses();
  for (int i = 0; i < n; ++i) {
    if (buses_[i].index != i) {
      throw ValidationError("bus indices must be dense 0..n-1");
    }
    if (!index_by_bus_id_.emplace(buses_[i].id, i).second) {
      throw ValidationError("duplicate bus id " +
                            std::to_string(buses_[i].id));
    }
  }
  for (const Generator& g : generators_) {
    if (g.bus < 0 || g.bus >= n) {
      throw ValidationError("generator at unknown bus index");
    }
  }

  std::set<std::pair<int, int>> pairs;
  LineId max_id = -1;
  for (Line& l : lines_) {
    if (l.from < 0 || l.from >= n || l.to < 0 || l.to >= n) {
      throw ValidationError("line " + std::to_string(l.id) +
                            " references an unknown bus");
    }
    if (l.from == l.to) {
      throw ValidationError("self-loop at bus " +
                            std::to_string(buses_[l.from].id));
    }
    if (l.from > l.to) {
      std::swap(l.from, l.to);
      l.flow_mw = -l.flow_mw;
    }
    if (!pairs.emplace(l.from, l.to).second) {
      throw ValidationError("parallel lines between buses " +
                            std::to_string(buses_[l.from].id) + " and " +
                            std::to_string(buses_[l.to].id));
    }
    if (l.id < 0) throw ValidationError("negative line id");
    max_id = std::max(max_id, l.id);
  }
  position_by_id_.assign(static_cast<std::size_t>(max_id + 1), -1);
  for (int pos = 0; pos < num_lines(); ++pos) {
    int& slot = position_by_id_[lines_[pos].id];
    if (slot != -1) {
      throw ValidationError("duplicate line id " +
                            std::to_string(lines_[pos].id));
    }
    slot = pos;
  }

  std::vector<int> degree(n, 0);
  for (const Line& l : lines_) {
    ++degree[l.from];
    ++degree[l.to];
  }
  offsets_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  adjacency_.resize(offsets_[n]);
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (int pos = 0; pos < num_lines(); ++pos) {
    const Line& l = lines_[pos];
    adjacency_[fill[l.from]++] = {l.to, pos};
    adjacency_[fill[l.to]++] = {l.from, pos};
  }
  for (int i = 0; i < n; ++i) {
    std::sort(adjacency_.begin() + offsets_[i],
              adjacency_.begin() + offsets_[i + 1],
              [](const Incidence& a, const Incidence& b) {
                return a.neighbor < b.neighbor;
              });
  }
}

const Line& Network::line(LineId id) const {
  auto pos = line_position(id);
  if (!pos) throw InvalidArgument("unknown line id " + std::to_string(id));
  return lines_[*pos];
}

std::optional<int> Network::line_position(LineId id) const {
  if (id < 0 || id >= static_cast<int>(position_by_id_.size()) ||
      position_by_id_[id] < 0) {
    return std::nullopt;
  }
  return position_by_id_[id];
}

std::optional<int> Network::find_line(int a, int b) const {
  for (const Incidence& inc : neighbors(a)) {
    if (inc.neighbor == b) return inc.line;
  }
  return std::nullopt;
}

std::optional<int> Network::bus_index(int external_id) const {
  auto it = index_by_bus_id_.find(external_id);
  if (it == index_by_bus_id_.end()) return std::nullopt;
  return it->second;
}

Partition make_partition(std::vector<int> assignment, int k) {
  if (k < 1) throw InvalidArgument("partition needs k >= 1");
  std::vector<int> size(k, 0);
  for (int c : assignment) {
    if (c < 0 || c >= k) {
      throw InvalidArgument("cluster label out of range");
    }
    ++size[c];
  }
  for (int r = 0; r < k; ++r) {
    if (size[r] == 0) {
      throw InvalidArgument("cluster " + std::to_string(r + 1) +
                            " is empty");
    }
  }
  return Partition{std::move(assignment), k};
}

std::vector<Line> merge_parallel(std::span<const RawBranch> branches) {
  std::map<std::pair<int, int>, Line> merged;
  for (const RawBranch& b : branches) {
    const bool flip = b.from > b.to;
    const std::pair<int, int> key{std::min(b.from, b.to),
                                  std::max(b.from, b.to)};
    const double flow = flip ? -b.flow_mw : b.flow_mw;
    auto [it, inserted] = merged.try_emplace(key);
    Line& l = it->second;
    if (inserted) {
      l.from = key.first;
      l.to = key.second;
      l.susceptance = b.susceptance;
      l.flow_mw = flow;
      l.capacity_mw = b.capacity_mw;
    } else {
      l.susceptance += b.susceptance;
      l.flow_mw += flow;
      if (b.capacity_mw) {
        l.capacity_mw = l.capacity_mw.value_or(0.0) + *b.capacity_mw;
      }
    }
  }
  std::vector<Line> out;
  out.reserve(merged.size());
  for (auto& [key, l] : merged) {
    l.id = static_cast<LineId>(out.size());
    out.push_back(l);
  }
  return out;
}

std::vector<int> connected_components(const Network& net) {
  const int n = net.num_buses();
  std::vector<int> label(n, -1);
  std::vector<int> stack;
  int next = 0;
  for (int s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (const Incidence& inc : net.neighbors(v)) {
        if (label[inc.neighbor] < 0) {
          label[inc.neighbor] = next;
          stack.push_back(inc.neighbor);
        }
      }
    }
    ++next;
  }
  return label;
}

bool is_connected(const Network& net) {
  if (net.num_buses() == 0) return true;
  const auto label = connected_components(net);
  return std::all_of(label.begin(), label.end(),
                     [](int c) { return c == 0; });
}

std::vector<LineId> cross_edges(const Network& net, const Partition& p) {
  std::vector<LineId> out;
  for (const Line& l : net.lines()) {
    if (p.assignment[l.from] != p.assignment[l.to]) out.push_back(l.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ReducedGraph reduced_graph(const Network& net, const Partition& p) {
  ReducedGraph rg{p.k, {}};
  for (LineId id : cross_edges(net, p)) {
    const Line& l = net.line(id);
    rg.edges.push_back({p.assignment[l.from], p.assignment[l.to], id,
                        std::abs(l.flow_mw)});
  }
  return rg;
}

bool is_connected(const ReducedGraph& rg) {
  if (rg.k <= 1) return true;
  std::vector<int> parent(rg.k);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = rg.k;
  for (const ReducedEdge& e : rg.edges) {
    const int a = find(e.cluster_a);
    const int b = find(e.cluster_b);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

bool is_tree_partition(const Network& net, const Partition& p) {
  const ReducedGraph rg = reduced_graph(net, p);
  return static_cast<int>(rg.edges.size()) == p.k - 1 && is_connected(rg);
}

bool clusters_connected(const Network& net, const Partition& p) {
  const int n = net.num_buses();
  std::vector<char> seen(n, 0);
  std::vector<char> cluster_done(p.k, 0);
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    const int c = p.assignment[s];
    if (cluster_done[c]) return false;  // second component of cluster c
    cluster_done[c] = 1;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (const Incidence& inc : net.neighbors(v)) {
        const int u = inc.neighbor;
        if (!seen[u] && p.assignment[u] == c) {
          seen[u] = 1;
          stack.push_back(u);
        }
      }
    }
  }
  return true;
}

std::vector<LineId> bridges(const Network& net) {
  const int n = net.num_buses();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<LineId> out;
  struct Frame {
    int bus;
    int parent_line;  // position, -1 at root
    int next;         // next adjacency slot to visit
  };
  std::vector<Frame> stack;
  int time = 0;
  for (int root = 0; root < n; ++root) {
    if (disc[root] >= 0) continue;
    disc[root] = low[root] = time++;
    stack.push_back({root, -1, 0});
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto adj = net.neighbors(f.bus);
      if (f.next < static_cast<int>(adj.size())) {
        const Incidence inc = adj[f.next++];
        if (inc.line == f.parent_line) continue;
        if (disc[inc.neighbor] < 0) {
          disc[inc.neighbor] = low[inc.neighbor] = time++;
          stack.push_back({inc.neighbor, inc.line, 0});
        } else {
          low[f.bus] = std::min(low[f.bus], disc[inc.neighbor]);
        }
        continue;
      }
      const Frame done = f;
      stack.pop_back();
      if (!stack.empty()) {
        const int parent = stack.back().bus;
        low[parent] = std::min(low[parent], low[done.bus]);
        if (low[done.bus] > disc[parent]) {
          out.push_back(net.lines()[done.parent_line].id);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Network apply_switching(const Network& net, std::span<const LineId> switched) {
  std::vector<char> drop(net.num_lines(), 0);
  for (LineId id : switched) {
    auto pos = net.line_position(id);
    if (!pos) {
      throw InvalidArgument("cannot switch unknown line id " +
                            std::to_string(id));
    }
    drop[*pos] = 1;
  }
  std::vector<Line> kept;
  kept.reserve(net.num_lines());
  for (int pos = 0; pos < net.num_lines(); ++pos) {
    if (!drop[pos]) kept.push_back(net.lines()[pos]);
  }
  return Network({net.buses().begin(), net.buses().end()}, std::move(kept),
                 net.base_mva(),
                 {net.generators().begin(), net.generators().end()});
}

Network with_flows(const Network& net, std::span<const double> flows_mw) {
  if (static_cast<int>(flows_mw.size()) != net.num_lines()) {
    throw InvalidArgument("flow vector size does not match line count");
  }
  std::vector<Line> lines(net.lines().begin(), net.lines().end());
  for (std::size_t i = 0; i < lines.size(); ++i) lines[i].flow_mw = flows_mw[i];
  return Network({net.buses().begin(), net.buses().end()}, std::move(lines),
                 net.base_mva(),
                 {net.generators().begin(), net.generators().end()});
}

Network with_injections(const Network& net,
                        std::span<const double> injections_mw) {
  if (static_cast<int>(injections_mw.size()) != net.num_buses()) {
    throw InvalidArgument("injection vector size does not match bus count");
  }
  std::vector<Bus> buses(net.buses().begin(), net.buses().end());
  for (std::size_t i = 0; i < buses.size(); ++i) {
    buses[i].injection_mw = injections_mw[i];
  }
  return Network(std::move(buses), {net.lines().begin(), net.lines().end()},
                 net.base_mva(),
                 {net.generators().begin(), net.generators().end()});
}

}  // namespace treepart
