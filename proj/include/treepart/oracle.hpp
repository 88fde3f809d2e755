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

// Brute-force ground truth for tiny instances.

#ifndef TREEPART_ORACLE_HPP_
#define TREEPART_ORACLE_HPP_

#include <cstdint>

#include "treepart/coherency.hpp"
#include "treepart/network.hpp"
#include "treepart/solution.hpp"

namespace treepart {

inline constexpr std::int64_t kDefaultOracleLimit = 10'000'000;

// Tries every assignment of the free buses (k^free of them, bus 0 most
// significant) and keeps the cheapest tree partition; among values within
// objective_tie_tolerance the first one in that order wins. Throws
// BudgetExceeded when k^free exceeds `limit` and InfeasibleError when no
// assignment yields connected non-empty clusters.
TreePartitionSolution enumerate_optimal(const Network& net,
                                        const CoherencyGroups& groups,
                                        std::int64_t limit = kDefaultOracleLimit);

}  // namespace treepart

#endif  // TREEPART_ORACLE_HPP_
