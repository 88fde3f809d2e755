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

// treepart: tree partitioning of power networks from the command line.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "treepart/cli/commands.hpp"
#include "treepart/cli/config.hpp"
#include "treepart/error.hpp"

namespace {

using treepart::cli::RunConfig;
using Verb = int (*)(const RunConfig&, std::ostream&);

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree partitioning of power transmission networks"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "Flat key = value settings file");

  // Every value flag is kept as text and funnelled through the same
  // settings map as the config file.
  const std::map<std::string, std::string> value_flags = {
      {"case", "Case file, alias (ieee30, ieee118, ...) or random:<n>[:<m>]"},
      {"k", "Number of clusters"},
      {"method", "two-stage | milp | ssr | oracle"},
      {"groups", "Coherent groups JSON file, or auto"},
      {"bridge-cmd", "Solver command with {model} and {solution} placeholders"},
      {"seed", "Seed for random cases"},
      {"out", "Output file (default: standard output)"},
      {"limit", "Oracle assignment limit or exact-search node limit"},
      {"slack", "Slack bus index"},
      {"dispatch", "case | opf"},
      {"solver", "builtin | bridge"},
      {"timeout", "Bridge timeout in seconds"},
      {"gap", "Relative gap passed to the bridge"},
      {"time-limit", "Time limit for the built-in exact search"},
      {"solution", "Solution JSON for export-dot"},
      {"cases", "Comma-separated cases for bench"},
      {"ks", "Comma-separated k values for bench"},
      {"methods", "Comma-separated methods for bench"},
  };
  std::map<std::string, std::string> given;
  std::map<std::string, CLI::Option*> options;
  for (const auto& [name, help] : value_flags) {
    options[name] = app.add_option("--" + name, given[name], help);
  }
  bool no_timing = false, warm_start = false;
  CLI::Option* no_timing_opt =
      app.add_flag("--no-timing", no_timing, "Leave runtimes out of the output");
  CLI::Option* warm_start_opt =
      app.add_flag("--warm-start", warm_start, "Seed the exact search with two-stage");

  const std::map<std::string, std::pair<Verb, std::string>> verbs = {
      {"parse", {treepart::cli::cmd_parse, "Print the network as JSON"}},
      {"flows", {treepart::cli::cmd_flows, "Print DC power flows"}},
      {"coherency", {treepart::cli::cmd_coherency, "Print slow-coherency groups"}},
      {"solve", {treepart::cli::cmd_solve, "Compute a tree partition"}},
      {"bench", {treepart::cli::cmd_bench, "Compare methods over cases as CSV"}},
      {"steiner", {treepart::cli::cmd_steiner, "Print Steiner trees and fixings"}},
      {"export-dot", {treepart::cli::cmd_export_dot, "Render a solution as Graphviz"}},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, verb] : verbs) subs[name] = app.add_subcommand(name, verb.second);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : treepart::cli::kExitUsage;
  }

  try {
    treepart::cli::Settings settings;
    if (!config_path.empty()) settings = treepart::cli::read_settings_file(config_path);
    for (const auto& [name, opt] : options) {
      if (opt->count() > 0) settings[name] = given[name];
    }
    if (no_timing_opt->count() > 0) settings["no-timing"] = no_timing ? "true" : "false";
    if (warm_start_opt->count() > 0) settings["warm-start"] = warm_start ? "true" : "false";
    const RunConfig config = treepart::cli::config_from_settings(settings);
    for (const auto& [name, sub] : subs) {
      if (sub->parsed()) return verbs.at(name).first(config, std::cout);
    }
  } catch (const treepart::Error& e) {
    std::cerr << "treepart: " << e.what() << "\n";
    return treepart::cli::exit_code_for(e.kind());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "treepart: bad JSON input: " << e.what() << "\n";
    return treepart::cli::kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "treepart: " << e.what() << "\n";
    return treepart::cli::kExitFailure;
  }
  return treepart::cli::kExitUsage;
}
