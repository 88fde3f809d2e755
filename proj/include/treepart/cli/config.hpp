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

// Run configuration shared by every command line verb.
//
// Settings come from three layers: built-in defaults, an optional flat
// `key = value` file, and command line flags, later layers winning. Keys
// are the long flag names without dashes.

#ifndef TREEPART_CLI_CONFIG_HPP_
#define TREEPART_CLI_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "treepart/bridge.hpp"
#include "treepart/coherency.hpp"
#include "treepart/network.hpp"
#include "treepart/solution.hpp"

namespace treepart::cli {

using Settings = std::map<std::string, std::string>;

struct RunConfig {
  std::string case_spec;
  int k = 2;
  Method method = Method::kTwoStage;
  std::string groups = "auto";     // "auto" or a groups JSON file
  int slack = 0;                   // bus index
  std::string dispatch = "case";   // "case" or "opf"
  std::string solver = "builtin";  // "builtin" or "bridge"
  std::string bridge_cmd;          // falls back to TREEPART_SOLVER_CMD
  double timeout_s = 600.0;
  double gap = 0.0;
  std::uint64_t seed = 1;
  std::string out;                 // empty: standard output
  bool no_timing = false;
  std::int64_t limit = 0;          // 0: per-method default
  double time_limit_s = 3600.0;
  bool warm_start = false;
  std::string solution;            // export-dot input
  std::vector<std::string> cases;  // bench
  std::vector<int> ks;             // bench
  std::vector<Method> methods;     // bench
};

// Reads `key = value` lines; `#` starts a comment. Throws ParseError.
Settings read_settings_file(const std::filesystem::path& path);

// Throws InvalidArgument for unknown keys or malformed values.
RunConfig config_from_settings(const Settings& settings);

// The bridge for this run; throws UnsupportedOperation when no command is
// configured anywhere.
SolverBridge bridge_for(const RunConfig& config);

struct LoadedCase {
  std::string name;
  Network network;  // with flows
};

// Accepts a file path, a short alias (ieee30, ieee73, ieee118, ieee300,
// toy4cycle, ...) or `random:<buses>[:<lines>]` seeded by config.seed.
// MATPOWER files get balanced case dispatch (or a bridge-solved DC-OPF
// with dispatch=opf) and DC flows; JSON network dumps keep their flows.
LoadedCase load_case(const std::string& spec, const RunConfig& config);

// The file a case alias or path refers to.
std::filesystem::path resolve_case_path(const std::string& spec);

// groups == "auto": slow coherency with config.k; otherwise read the file.
CoherencyGroups load_groups(const Network& net, const RunConfig& config);

}  // namespace treepart::cli

#endif  // TREEPART_CLI_CONFIG_HPP_
