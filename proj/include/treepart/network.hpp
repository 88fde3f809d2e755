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

// Graph model of a transmission network and the structural notions used by
// every solver: partitions, cross edges, reduced graphs, tree partitions and
// bridges. Topology is undirected; direction only survives in the sign of
// Line::flow_mw, which is positive from `from` to `to`.

#ifndef TREEPART_NETWORK_HPP_
#define TREEPART_NETWORK_HPP_

#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace treepart {

// Stable line identifier. A freshly built network numbers its lines 0..m-1;
// switching keeps the ids of the surviving lines.
using LineId = int;

struct Bus {
  int id = 0;     // external identifier from the case file
  int index = 0;  // dense position 0..n-1
  double injection_mw = 0.0;  // generation minus load
  double load_mw = 0.0;
  bool is_generator = false;
};

struct Generator {
  int bus = 0;  // bus index
  double pg_mw = 0.0;
  double pmin_mw = 0.0;
  double pmax_mw = 0.0;
  double cost_per_mwh = 0.0;  // linear cost coefficient
};

struct Line {
  LineId id = 0;
  int from = 0;  // always < to
  int to = 0;
  double susceptance = 1.0;  // per unit, 1/x
  double flow_mw = 0.0;
  std::optional<double> capacity_mw;
};

// A branch record before parallel lines are merged. Orientation is free.
struct RawBranch {
  int from = 0;
  int to = 0;
  double susceptance = 1.0;
  double flow_mw = 0.0;
  std::optional<double> capacity_mw;
};

struct Incidence {
  int neighbor;
  int line;  // position in Network::lines()
};

// Immutable simple graph of buses and lines. The constructor normalizes line
// orientation to (min, max) and rejects self-loops, parallel lines,
// duplicate ids and non-dense bus indices. Connectivity is not required
// here; case loaders check it separately.
class Network {
 public:
  Network() = default;
  Network(std::vector<Bus> buses, std::vector<Line> lines, double base_mva,
          std::vector<Generator> generators = {});

  int num_buses() const { return static_cast<int>(buses_.size()); }
  int num_lines() const { return static_cast<int>(lines_.size()); }
  double base_mva() const { return base_mva_; }

  std::span<const Bus> buses() const { return buses_; }
  const Bus& bus(int index) const { return buses_[index]; }
  std::span<const Line> lines() const { return lines_; }
  std::span<const Generator> generators() const { return generators_; }

  // Throws InvalidArgument for unknown ids.
  const Line& line(LineId id) const;
  std::optional<int> line_position(LineId id) const;
  bool has_line(LineId id) const { return line_position(id).has_value(); }

  // Position of the line joining a and b, if any.
  std::optional<int> find_line(int a, int b) const;
  std::optional<int> bus_index(int external_id) const;

  std::span<const Incidence> neighbors(int bus) const {
    return {adjacency_.data() + offsets_[bus],
            adjacency_.data() + offsets_[bus + 1]};
  }

 private:
  std::vector<Bus> buses_;
  std::vector<Line> lines_;
  std::vector<Generator> generators_;
  double base_mva_ = 100.0;
  std::vector<int> offsets_{0};
  std::vector<Incidence> adjacency_;
  std::vector<int> position_by_id_;
  std::unordered_map<int, int> index_by_bus_id_;
};

// Assignment of every bus to one of k clusters, labelled 0..k-1.
struct Partition {
  std::vector<int> assignment;
  int k = 0;

  friend bool operator==(const Partition&, const Partition&) = default;
};

// Validates that labels are in range and every cluster is non-empty.
Partition make_partition(std::vector<int> assignment, int k);

struct ReducedEdge {
  int cluster_a;
  int cluster_b;
  LineId line;
  double weight;  // |flow_mw|
};

// Clusters as nodes, one edge per cross edge. May contain parallel edges.
struct ReducedGraph {
  int k = 0;
  std::vector<ReducedEdge> edges;
};

// One line per unordered bus pair: susceptances, capacities and signed
// flows (re-signed to the canonical direction) are summed. Output is sorted
// by (from, to) and numbered 0..m-1.
std::vector<Line> merge_parallel(std::span<const RawBranch> branches);

bool is_connected(const Network& net);

// Component label per bus, labels numbered in order of lowest member.
std::vector<int> connected_components(const Network& net);

std::vector<LineId> cross_edges(const Network& net, const Partition& p);
ReducedGraph reduced_graph(const Network& net, const Partition& p);
bool is_connected(const ReducedGraph& rg);
bool is_tree_partition(const Network& net, const Partition& p);

// True iff the subgraph induced by every cluster is connected.
bool clusters_connected(const Network& net, const Partition& p);

// Cut-edges by Tarjan's lowpoint DFS, sorted by id.
std::vector<LineId> bridges(const Network& net);

// Copy of net without the given lines. The result may be disconnected.
Network apply_switching(const Network& net, std::span<const LineId> switched);

// Copy of net with flow_mw replaced; flows_mw is indexed by line position.
Network with_flows(const Network& net, std::span<const double> flows_mw);

// Copy of net with injections replaced; indexed by bus.
Network with_injections(const Network& net, std::span<const double> injections_mw);

}  // namespace treepart

#endif  // TREEPART_NETWORK_HPP_
