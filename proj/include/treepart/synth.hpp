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

// Seeded random instances for tests, benchmarks and the `random:` case
// alias of the command line tool.

#ifndef TREEPART_SYNTH_HPP_
#define TREEPART_SYNTH_HPP_

#include <cstdint>

#include "treepart/coherency.hpp"
#include "treepart/network.hpp"

namespace treepart {

struct SynthOptions {
  int buses = 10;
  int lines = 14;  // clamped to [buses-1, buses(buses-1)/2]
  std::uint64_t seed = 1;
  // true: flows from a DC solve of random balanced injections;
  // false: independent random flows in [-100, 100] MW, two decimals.
  bool dc_flows = true;
  double generator_share = 0.4;  // fraction of buses flagged as generators
};

// Connected random network: a random spanning tree (bus i joins a random
// earlier bus) plus random extra lines. External ids are 1..n.
Network random_network(const SynthOptions& options);

// k disjoint groups of 1..max_size buses each, drawn from the generator
// buses when there are enough of them and from all buses otherwise.
CoherencyGroups random_groups(const Network& net, int k, int max_size,
                              std::uint64_t seed);

}  // namespace treepart

#endif  // TREEPART_SYNTH_HPP_
