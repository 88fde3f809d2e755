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

// The command line verbs. Each one writes its result to config.out (or the
// given stream when out is empty) and returns a process exit code.

#ifndef TREEPART_CLI_COMMANDS_HPP_
#define TREEPART_CLI_COMMANDS_HPP_

#include <ostream>
#include <string>

#include "treepart/cli/config.hpp"
#include "treepart/error.hpp"

namespace treepart::cli {

enum ExitCode {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitParse = 3,
  kExitValidation = 4,
  kExitInfeasible = 5,
  kExitBudget = 6,
  kExitSolver = 7,
  kExitUnsupported = 8,
  kExitIo = 9,
  kExitInvariant = 10,
};

int exit_code_for(ErrorKind kind);

// Short lowercase tag used in the bench status column.
std::string error_tag(ErrorKind kind);

// Runs one method on one instance. The built-in exact search honours
// config.limit as a node limit and config.time_limit_s; sets *proven to
// false when a limit cut it short.
TreePartitionSolution run_method(const Network& net, const CoherencyGroups& groups,
                                 Method method, const RunConfig& config,
                                 bool* proven = nullptr);

int cmd_parse(const RunConfig& config, std::ostream& out);
int cmd_flows(const RunConfig& config, std::ostream& out);
int cmd_coherency(const RunConfig& config, std::ostream& out);
int cmd_solve(const RunConfig& config, std::ostream& out);
int cmd_steiner(const RunConfig& config, std::ostream& out);
int cmd_bench(const RunConfig& config, std::ostream& out);
int cmd_export_dot(const RunConfig& config, std::ostream& out);

// CSV for the benchmark grid: case, k, method, objective_mw, runtime_s,
// pct_vs_milp, status. Rows follow the order of cases, ks and methods.
std::string bench_csv(const RunConfig& config);

// Graphviz text: buses filled by cluster, switched lines dashed red,
// retained bridges bold. Throws InvalidArgument when sol does not fit net.
std::string dot_string(const Network& net, const TreePartitionSolution& sol);

}  // namespace treepart::cli

#endif  // TREEPART_CLI_COMMANDS_HPP_
