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

// Exhaustive comparison of the MILP feasible set with the direct definition
// of a coherency-respecting tree partition, for tiny instances.

#ifndef TREEPART_TESTS_FORMULATION_CHECK_HPP_
#define TREEPART_TESTS_FORMULATION_CHECK_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "treepart/milp.hpp"
#include "treepart/network.hpp"
#include "treepart/solution.hpp"

namespace treepart::testing {

struct FormulationCheck {
  std::int64_t candidates = 0;   // (assignment, switched set) pairs tried
  std::int64_t feasible = 0;     // pairs both sides accept
  std::int64_t mismatches = 0;
  std::string first_mismatch;
};

// For every assignment of buses to k labels and every subset of lines to
// switch off, builds the only possible y and w, a commodity flow along a
// BFS tree when the remaining network is connected, and asks whether the
// model accepts the point. The answer must agree with solution_problems.
inline FormulationCheck check_formulation(const Network& net, const CoherencyGroups& groups) {
  const TreePartitionModel tpm = build_model(net, groups);
  const int n = net.num_buses(), m = net.num_lines(), k = groups.k();
  const auto lines = net.lines();
  FormulationCheck out;
  std::int64_t assignments = 1;
  for (int i = 0; i < n; ++i) assignments *= k;

  std::vector<int> a(n);
  std::vector<double> v(tpm.model.variables.size());
  for (std::int64_t code = 0; code < assignments; ++code) {
    std::int64_t c = code;
    for (int i = n - 1; i >= 0; --i) {
      a[i] = static_cast<int>(c % k);
      c /= k;
    }
    for (int mask = 0; mask < (1 << m); ++mask) {
      ++out.candidates;
      std::fill(v.begin(), v.end(), 0.0);
      for (int i = 0; i < n; ++i) v[tpm.x(i, a[i])] = 1.0;
      for (int e = 0; e < m; ++e) {
        const bool on = !(mask >> e & 1);
        const bool internal = a[lines[e].from] == a[lines[e].to];
        v[tpm.z(e)] = on;
        if (internal) v[tpm.y(e, a[lines[e].from])] = 1.0;
        v[tpm.w(e)] = static_cast<double>(on) - static_cast<double>(internal);
      }
      // Commodity: BFS from bus 0 over lines left on, each tree edge
      // carrying the size of the subtree beyond it.
      std::vector<int> order{0}, via(n, -1);
      std::vector<char> seen(n, 0);
      seen[0] = 1;
      for (std::size_t h = 0; h < order.size(); ++h) {
        for (const Incidence& inc : net.neighbors(order[h])) {
          if ((mask >> inc.line & 1) || seen[inc.neighbor]) continue;
          seen[inc.neighbor] = 1;
          via[inc.neighbor] = inc.line;
          order.push_back(inc.neighbor);
        }
      }
      std::vector<double> sub(n, 1.0);
      for (int h = static_cast<int>(order.size()) - 1; h > 0; --h) {
        const int u = order[h], e = via[u];
        const int p = lines[e].from == u ? lines[e].to : lines[e].from;
        sub[p] += sub[u];
        v[tpm.q(e)] = lines[e].to == u ? sub[u] : -sub[u];
      }
      const bool model_ok = violated_constraints(tpm.model, v).empty();

      Partition p;
      p.k = k;
      p.assignment = a;
      std::vector<LineId> off;
      for (int e = 0; e < m; ++e) {
        if (mask >> e & 1) off.push_back(lines[e].id);
      }
      const TreePartitionSolution sol = make_solution(net, p, off, Method::kMilp);
      const bool direct_ok = solution_problems(net, groups, sol).empty();

      if (model_ok && direct_ok) ++out.feasible;
      if (model_ok != direct_ok) {
        if (out.mismatches++ == 0) {
          out.first_mismatch = "assignment code " + std::to_string(code) + ", mask " +
                               std::to_string(mask) + (model_ok ? " model only" : " direct only");
        }
      }
    }
  }
  return out;
}

}  // namespace treepart::testing

#endif  // TREEPART_TESTS_FORMULATION_CHECK_HPP_
