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

#include "treepart/cli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "treepart/case_io.hpp"
#include "treepart/dcflow.hpp"
#include "treepart/dcopf.hpp"
#include "treepart/error.hpp"
#include "treepart/synth.hpp"

#ifndef TREEPART_DATA_DIR
#define TREEPART_DATA_DIR "data"
#endif

namespace treepart::cli {
namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  if (!(in >> out) || !(in >> std::ws).eof()) {
    throw InvalidArgument("setting " + key + " expects a number, got '" + value + "'");
  }
  return out;
}

bool boolean(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw InvalidArgument("setting " + key + " expects true or false, got '" + value + "'");
}

}  // namespace

Settings read_settings_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  Settings settings;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(line_no, "empty key");
    settings[key] = trim(line.substr(eq + 1));
  }
  return settings;
}

RunConfig config_from_settings(const Settings& settings) {
  RunConfig c;
  for (const auto& [key, value] : settings) {
    if (key == "case") c.case_spec = value;
    else if (key == "k") c.k = number<int>(key, value);
    else if (key == "method") c.method = parse_method(value);
    else if (key == "groups") c.groups = value.empty() ? "auto" : value;
    else if (key == "slack") c.slack = number<int>(key, value);
    else if (key == "dispatch") c.dispatch = value;
    else if (key == "solver") c.solver = value;
    else if (key == "bridge-cmd") c.bridge_cmd = value;
    else if (key == "timeout") c.timeout_s = number<double>(key, value);
    else if (key == "gap") c.gap = number<double>(key, value);
    else if (key == "seed") c.seed = number<std::uint64_t>(key, value);
    else if (key == "out") c.out = value;
    else if (key == "no-timing") c.no_timing = boolean(key, value);
    else if (key == "limit") c.limit = number<std::int64_t>(key, value);
    else if (key == "time-limit") c.time_limit_s = number<double>(key, value);
    else if (key == "warm-start") c.warm_start = boolean(key, value);
    else if (key == "solution") c.solution = value;
    else if (key == "cases") c.cases = split_list(value);
    else if (key == "ks") {
      c.ks.clear();
      for (const std::string& s : split_list(value)) c.ks.push_back(number<int>(key, s));
    } else if (key == "methods") {
      c.methods.clear();
      for (const std::string& s : split_list(value)) c.methods.push_back(parse_method(s));
    } else {
      throw InvalidArgument("unknown setting '" + key + "'");
    }
  }
  if (c.dispatch != "case" && c.dispatch != "opf") {
    throw InvalidArgument("dispatch must be 'case' or 'opf'");
  }
  if (c.solver != "builtin" && c.solver != "bridge") {
    throw InvalidArgument("solver must be 'builtin' or 'bridge'");
  }
  // A bridge command on its own selects the bridge.
  if (!c.bridge_cmd.empty() && !settings.count("solver")) c.solver = "bridge";
  if (c.k < 1) throw InvalidArgument("k must be at least 1");
  if (c.limit < 0) throw InvalidArgument("limit must be non-negative");
  return c;
}

SolverBridge bridge_for(const RunConfig& config) {
  SolverBridge bridge =
      config.bridge_cmd.empty() ? bridge_from_env() : SolverBridge{config.bridge_cmd};
  bridge.timeout_s = config.timeout_s;
  bridge.gap = config.gap;
  check_bridge(bridge);
  return bridge;
}

fs::path resolve_case_path(const std::string& spec) {
  if (fs::exists(spec)) return spec;
  static const std::map<std::string, std::string> aliases = {
      {"ieee30", "case_ieee30.m"},       {"case30", "case30.m"},
      {"ieee57", "case57.m"},            {"ieee73", "case_RTS_GMLC.m"},
      {"rts73", "case_RTS_GMLC.m"},      {"pegase89", "case89pegase.m"},
      {"ieee118", "case118.m"},          {"activsg200", "case_ACTIVSg200.m"},
      {"ieee300", "case300.m"},          {"activsg500", "case_ACTIVSg500.m"},
      {"toy4cycle", "toy4cycle.json"},
  };
  const char* env = std::getenv("TREEPART_DATA");
  const fs::path dir = fs::path(env != nullptr && *env ? env : TREEPART_DATA_DIR) / "cases";
  auto it = aliases.find(spec);
  const fs::path candidate = dir / (it != aliases.end() ? it->second : spec);
  if (fs::exists(candidate)) return candidate;
  if (fs::exists(dir / (spec + ".m"))) return dir / (spec + ".m");
  throw IoError("no case file or alias named '" + spec + "'");
}

LoadedCase load_case(const std::string& spec, const RunConfig& config) {
  if (spec.rfind("random:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(spec.substr(7));
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.empty() || parts.size() > 2) {
      throw InvalidArgument("random case spec is random:<buses>[:<lines>]");
    }
    SynthOptions opt;
    opt.buses = number<int>("case", parts[0]);
    opt.lines = parts.size() == 2 ? number<int>("case", parts[1])
                                  : opt.buses + opt.buses * 2 / 5;
    opt.seed = config.seed;
    return {spec, random_network(opt)};
  }
  const fs::path path = resolve_case_path(spec);
  Network net = load_network(path);
  if (path.extension() == ".json") return {spec, std::move(net)};
  net = balanced_dispatch(net);
  if (config.dispatch == "opf") {
    OpfResult opf = solve_dcopf_via_bridge(net, bridge_for(config), {}, config.slack);
    return {spec, std::move(opf.network)};
  }
  return {spec, with_dc_flows(net, config.slack)};
}

CoherencyGroups load_groups(const Network& net, const RunConfig& config) {
  if (config.groups == "auto") return slow_coherency(net, config.k);
  return groups_from_json(net, nlohmann::json::parse(read_text_file(config.groups)));
}

}  // namespace treepart::cli
