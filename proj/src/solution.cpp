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

#include "treepart/solution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "treepart/error.hpp"

namespace treepart {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kTwoStage: return "two-stage";
    case Method::kMilp: return "milp";
    case Method::kSsr: return "ssr";
    case Method::kOracle: return "oracle";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "two-stage" || name == "2-st" || name == "twostage") {
    return Method::kTwoStage;
  }
  if (name == "milp") return Method::kMilp;
  if (name == "ssr") return Method::kSsr;
  if (name == "oracle") return Method::kOracle;
  throw InvalidArgument("unknown method '" + std::string(name) + "'");
}

double disruption(const Network& net, std::span<const LineId> switched) {
  std::vector<LineId> ids(switched.begin(), switched.end());
  std::sort(ids.begin(), ids.end());
  double total = 0.0;
  for (LineId id : ids) total += std::abs(net.line(id).flow_mw);
  return total;
}

TreePartitionSolution make_solution(const Network& net, Partition partition,
                                    std::vector<LineId> switched, Method method) {
  TreePartitionSolution sol;
  std::sort(switched.begin(), switched.end());
  switched.erase(std::unique(switched.begin(), switched.end()), switched.end());
  const std::vector<LineId> cross = cross_edges(net, partition);
  std::set_difference(cross.begin(), cross.end(), switched.begin(),
                      switched.end(), std::back_inserter(sol.retained_bridges));
  sol.disruption_mw = disruption(net, switched);
  sol.switched = std::move(switched);
  sol.partition = std::move(partition);
  sol.method = method;
  return sol;
}

std::vector<std::string> solution_problems(const Network& net,
                                           const CoherencyGroups& groups,
                                           const TreePartitionSolution& sol) {
  std::vector<std::string> problems;
  const Partition& p = sol.partition;
  const int n = net.num_buses();
  if (static_cast<int>(p.assignment.size()) != n) {
    problems.push_back("partition does not cover every bus");
    return problems;
  }
  if (groups.k() > 0 && p.k != groups.k()) {
    problems.push_back("partition has k=" + std::to_string(p.k) +
                       " but there are " + std::to_string(groups.k()) +
                       " coherent groups");
  }
  std::vector<int> size(std::max(p.k, 0), 0);
  for (int c : p.assignment) {
    if (c < 0 || c >= p.k) {
      problems.push_back("cluster label out of range");
      return problems;
    }
    ++size[c];
  }
  for (int r = 0; r < p.k; ++r) {
    if (size[r] == 0) problems.push_back("cluster " + std::to_string(r + 1) + " is empty");
  }
  for (LineId id : sol.switched) {
    if (!net.has_line(id)) {
      problems.push_back("switched line " + std::to_string(id) + " does not exist");
      return problems;
    }
  }
  const std::vector<LineId> cross = cross_edges(net, p);
  std::vector<LineId> switched = sol.switched;
  std::sort(switched.begin(), switched.end());
  std::vector<LineId> retained = sol.retained_bridges;
  std::sort(retained.begin(), retained.end());
  std::vector<LineId> internal_switched;
  std::set_difference(switched.begin(), switched.end(), cross.begin(),
                      cross.end(), std::back_inserter(internal_switched));
  if (!internal_switched.empty()) {
    problems.push_back("an internal line is switched off");
  }
  std::vector<LineId> both;
  std::set_intersection(switched.begin(), switched.end(), retained.begin(),
                        retained.end(), std::back_inserter(both));
  if (!both.empty()) problems.push_back("a line is both switched and retained");
  std::vector<LineId> united;
  std::set_union(switched.begin(), switched.end(), retained.begin(),
                 retained.end(), std::back_inserter(united));
  if (united != cross) {
    problems.push_back("switched and retained lines do not make up the cross edges");
  }
  if (static_cast<int>(retained.size()) != p.k - 1) {
    problems.push_back("expected " + std::to_string(p.k - 1) +
                       " retained bridges, found " +
                       std::to_string(retained.size()));
  }
  const Network post = apply_switching(net, switched);
  if (!is_connected(post)) {
    problems.push_back("post-switching network is disconnected");
  } else if (!is_tree_partition(post, p)) {
    problems.push_back("partition is not a tree partition of the post-switching network");
  }
  for (int r = 0; r < groups.k() && r < p.k; ++r) {
    for (int bus : groups.groups[r]) {
      if (p.assignment[bus] != r) {
        problems.push_back("coherent bus " + std::to_string(net.bus(bus).id) +
                           " is not in cluster " + std::to_string(r + 1));
      }
    }
  }
  const double expected = disruption(net, switched);
  if (std::abs(expected - sol.disruption_mw) > 1e-9 * std::max(1.0, expected)) {
    std::ostringstream msg;
    msg << "reported disruption " << sol.disruption_mw << " differs from "
        << expected;
    problems.push_back(msg.str());
  }
  return problems;
}

void validate_solution(const Network& net, const CoherencyGroups& groups,
                       const TreePartitionSolution& sol) {
  const auto problems = solution_problems(net, groups, sol);
  if (problems.empty()) return;
  std::string msg = "invalid tree partition solution:";
  for (const auto& p : problems) msg += "\n  " + p;
  throw InvariantViolation(msg);
}

nlohmann::json solution_to_json(const Network& net,
                                const TreePartitionSolution& sol,
                                bool include_timing) {
  using nlohmann::json;
  json clusters = json::array();
  for (int r = 0; r < sol.partition.k; ++r) {
    json members = json::array();
    for (int i = 0; i < net.num_buses(); ++i) {
      if (sol.partition.assignment[i] == r) members.push_back(net.bus(i).id);
    }
    clusters.push_back(members);
  }
  auto pairs = [&](const std::vector<LineId>& ids) {
    json out = json::array();
    for (LineId id : ids) {
      const Line& l = net.line(id);
      out.push_back({net.bus(l.from).id, net.bus(l.to).id});
    }
    return out;
  };
  json j = {{"method", std::string(method_name(sol.method))},
            {"k", sol.partition.k},
            {"clusters", clusters},
            {"switched", pairs(sol.switched)},
            {"bridges", pairs(sol.retained_bridges)},
            {"disruption_mw", sol.disruption_mw}};
  if (include_timing) j["runtime_s"] = sol.runtime_s;
  return j;
}

TreePartitionSolution solution_from_json(const Network& net,
                                         const nlohmann::json& j) {
  try {
    const int k = j.at("k").get<int>();
    std::vector<int> assignment(net.num_buses(), -1);
    int r = 0;
    for (const auto& cluster : j.at("clusters")) {
      for (const auto& id : cluster) {
        auto idx = net.bus_index(id.get<int>());
        if (!idx) throw InvalidArgument("solution names unknown bus " + id.dump());
        if (assignment[*idx] != -1) {
          throw InvalidArgument("bus " + id.dump() + " appears in two clusters");
        }
        assignment[*idx] = r;
      }
      ++r;
    }
    if (r != k) throw InvalidArgument("solution lists a wrong number of clusters");
    if (std::count(assignment.begin(), assignment.end(), -1) > 0) {
      throw InvalidArgument("solution does not assign every bus of the network");
    }
    auto ids = [&](const nlohmann::json& list) {
      std::vector<LineId> out;
      for (const auto& pair : list) {
        auto a = net.bus_index(pair.at(0).get<int>());
        auto b = net.bus_index(pair.at(1).get<int>());
        std::optional<int> pos;
        if (a && b) pos = net.find_line(*a, *b);
        if (!pos) throw InvalidArgument("solution names unknown line " + pair.dump());
        out.push_back(net.lines()[*pos].id);
      }
      std::sort(out.begin(), out.end());
      return out;
    };
    TreePartitionSolution sol;
    sol.partition = make_partition(std::move(assignment), k);
    sol.switched = ids(j.at("switched"));
    sol.retained_bridges = ids(j.at("bridges"));
    sol.disruption_mw = j.at("disruption_mw").get<double>();
    sol.method = parse_method(j.at("method").get<std::string>());
    sol.runtime_s = j.value("runtime_s", 0.0);
    return sol;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed solution JSON: ") + e.what());
  }
}

}  // namespace treepart
