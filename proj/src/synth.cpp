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

#include "treepart/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "treepart/dcflow.hpp"
#include "treepart/error.hpp"

namespace treepart {

Network random_network(const SynthOptions& options) {
  const int n = options.buses;
  if (n < 1) throw InvalidArgument("random network needs at least one bus");
  const long max_lines = static_cast<long>(n) * (n - 1) / 2;
  const long m = std::clamp<long>(options.lines, n - 1, max_lines);
  std::mt19937_64 rng(options.seed);
  auto uniform_int = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  auto uniform_real = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  std::set<std::pair<int, int>> pairs;
  for (int i = 1; i < n; ++i) pairs.emplace(uniform_int(0, i - 1), i);
  while (static_cast<long>(pairs.size()) < m) {
    int a = uniform_int(0, n - 1), b = uniform_int(0, n - 1);
    if (a == b) continue;
    pairs.emplace(std::min(a, b), std::max(a, b));
  }

  std::vector<Bus> buses(n);
  for (int i = 0; i < n; ++i) {
    buses[i].id = i + 1;
    buses[i].index = i;
    buses[i].is_generator = uniform_real(0.0, 1.0) < options.generator_share;
  }
  std::vector<Line> lines;
  for (const auto& [a, b] : pairs) {
    Line l;
    l.id = static_cast<LineId>(lines.size());
    l.from = a;
    l.to = b;
    l.susceptance = std::round(uniform_real(2.0, 20.0) * 100.0) / 100.0;
    l.flow_mw = std::round(uniform_real(-100.0, 100.0) * 100.0) / 100.0;
    lines.push_back(l);
  }

  if (!options.dc_flows) return Network(std::move(buses), std::move(lines), 100.0);

  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    buses[i].injection_mw = std::round(uniform_real(-80.0, 80.0) * 100.0) / 100.0;
    total += buses[i].injection_mw;
  }
  buses[0].injection_mw -= total;  // balance at the first bus
  const Network shaped(std::move(buses), std::move(lines), 100.0);
  return with_dc_flows(shaped);
}

CoherencyGroups random_groups(const Network& net, int k, int max_size,
                              std::uint64_t seed) {
  if (k < 1 || max_size < 1) throw InvalidArgument("random groups need k, size >= 1");
  std::vector<int> pool;
  for (int i = 0; i < net.num_buses(); ++i) {
    if (net.bus(i).is_generator) pool.push_back(i);
  }
  if (static_cast<int>(pool.size()) < k * max_size) {
    pool.resize(net.num_buses());
    for (int i = 0; i < net.num_buses(); ++i) pool[i] = i;
  }
  if (static_cast<int>(pool.size()) < k) {
    throw InvalidArgument("not enough buses for " + std::to_string(k) + " groups");
  }
  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  CoherencyGroups groups;
  std::size_t next = 0;
  for (int r = 0; r < k; ++r) {
    const int left = static_cast<int>(pool.size() - next) - (k - r - 1);
    const int size = std::uniform_int_distribution<int>(1, std::min(max_size, left))(rng);
    std::vector<int> g(pool.begin() + next, pool.begin() + next + size);
    next += size;
    std::sort(g.begin(), g.end());
    groups.groups.push_back(std::move(g));
  }
  return groups;
}

}  // namespace treepart
