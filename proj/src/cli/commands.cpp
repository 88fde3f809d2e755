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

#include "treepart/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "treepart/bnb.hpp"
#include "treepart/bridge.hpp"
#include "treepart/case_io.hpp"
#include "treepart/dcflow.hpp"
#include "treepart/oracle.hpp"
#include "treepart/steiner.hpp"
#include "treepart/twostage.hpp"

namespace treepart::cli {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return kExitParse;
    case ErrorKind::kValidation: return kExitValidation;
    case ErrorKind::kInvalidArgument: return kExitUsage;
    case ErrorKind::kSingular: return kExitValidation;
    case ErrorKind::kInfeasible: return kExitInfeasible;
    case ErrorKind::kBudget: return kExitBudget;
    case ErrorKind::kModelBuild: return kExitInfeasible;
    case ErrorKind::kSolver: return kExitSolver;
    case ErrorKind::kUnsupported: return kExitUnsupported;
    case ErrorKind::kInvariant: return kExitInvariant;
    case ErrorKind::kIo: return kExitIo;
  }
  return kExitFailure;
}

std::string error_tag(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "parse_error";
    case ErrorKind::kValidation: return "invalid_case";
    case ErrorKind::kInvalidArgument: return "bad_argument";
    case ErrorKind::kSingular: return "singular";
    case ErrorKind::kInfeasible: return "infeasible";
    case ErrorKind::kBudget: return "budget";
    case ErrorKind::kModelBuild: return "model_error";
    case ErrorKind::kSolver: return "solver_error";
    case ErrorKind::kUnsupported: return "unsupported";
    case ErrorKind::kInvariant: return "invalid_solution";
    case ErrorKind::kIo: return "io_error";
  }
  return "error";
}

namespace {

// Writes to config.out when set, otherwise to the fallback stream.
void emit(const RunConfig& config, std::ostream& fallback, const std::string& text) {
  if (config.out.empty()) {
    fallback << text;
  } else {
    write_text_file(config.out, text);
  }
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

LoadedCase require_case(const RunConfig& config) {
  if (config.case_spec.empty()) throw InvalidArgument("--case is required");
  return load_case(config.case_spec, config);
}

}  // namespace

TreePartitionSolution run_method(const Network& net, const CoherencyGroups& groups,
                                 Method method, const RunConfig& config, bool* proven) {
  if (proven != nullptr) *proven = true;
  if (method == Method::kTwoStage) return two_stage(net, groups);
  if (method == Method::kOracle) {
    return enumerate_optimal(net, groups,
                             config.limit > 0 ? config.limit : kDefaultOracleLimit);
  }

  std::optional<SteinerFixings> fixings;
  if (method == Method::kSsr) {
    const auto trees = steiner_trees(net, groups);
    fixings = build_fixings(net, trees);
  }
  const SteinerFixings* ssr = fixings ? &*fixings : nullptr;
  if (config.solver == "bridge") {
    return solve_via_bridge(net, groups, ssr, bridge_for(config));
  }
  BnBOptions options;
  if (config.limit > 0) options.node_limit = config.limit;
  options.time_limit_s = config.time_limit_s;
  options.warm_start = config.warm_start;
  auto [sol, stats] = solve_builtin(net, groups, ssr, options);
  if (proven != nullptr) *proven = stats.proven_optimal;
  return sol;
}

int cmd_parse(const RunConfig& config, std::ostream& out) {
  emit(config, out, dump(network_to_json(require_case(config).network)));
  return kExitOk;
}

int cmd_flows(const RunConfig& config, std::ostream& out) {
  const Network net = require_case(config).network;
  emit(config, out, dump(flows_to_json(net, solve_dc(net, config.slack))));
  return kExitOk;
}

int cmd_coherency(const RunConfig& config, std::ostream& out) {
  const Network net = require_case(config).network;
  emit(config, out, dump(groups_to_json(net, slow_coherency(net, config.k))));
  return kExitOk;
}

int cmd_solve(const RunConfig& config, std::ostream& out) {
  const Network net = require_case(config).network;
  const CoherencyGroups groups = load_groups(net, config);
  bool proven = true;
  const TreePartitionSolution sol = run_method(net, groups, config.method, config, &proven);
  validate_solution(net, groups, sol);
  emit(config, out, dump(solution_to_json(net, sol, !config.no_timing)));
  return proven ? kExitOk : kExitBudget;
}

int cmd_steiner(const RunConfig& config, std::ostream& out) {
  const Network net = require_case(config).network;
  const CoherencyGroups groups = load_groups(net, config);
  const auto trees = steiner_trees(net, groups);
  const SteinerFixings fix = build_fixings(net, trees);
  nlohmann::json j;
  j["trees"] = nlohmann::json::array();
  for (const SteinerTree& t : trees) j["trees"].push_back(steiner_to_json(net, t));
  nlohmann::json buses = nlohmann::json::array();
  for (const auto& [bus, r] : fix.bus_fix) buses.push_back({net.bus(bus).id, r + 1});
  nlohmann::json lines = nlohmann::json::array();
  for (const auto& [id, r] : fix.edge_fix) {
    const Line& l = net.line(id);
    lines.push_back({net.bus(l.from).id, net.bus(l.to).id, r + 1});
  }
  j["fixings"] = {{"buses", buses}, {"lines", lines}};
  emit(config, out, dump(j));
  return kExitOk;
}

std::string bench_csv(const RunConfig& config) {
  if (config.cases.empty()) throw InvalidArgument("bench needs --cases");
  const std::vector<int> ks = config.ks.empty() ? std::vector<int>{config.k} : config.ks;
  const std::vector<Method> methods =
      config.methods.empty() ? std::vector<Method>{Method::kTwoStage, Method::kMilp}
                             : config.methods;

  struct Row {
    std::string method;
    std::optional<double> objective;
    double runtime = 0.0;
    std::string status;
  };
  auto fmt = [](const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return std::string(buf);
  };

  std::string csv = "case,k,method,objective_mw,runtime_s,pct_vs_milp,status\n";
  for (const std::string& spec : config.cases) {
    std::optional<Network> net;
    std::string case_status;
    try {
      net = load_case(spec, config).network;
    } catch (const Error& e) {
      case_status = error_tag(e.kind());
    }
    for (int k : ks) {
      RunConfig cell = config;
      cell.k = k;
      std::optional<CoherencyGroups> groups;
      std::string cell_status = case_status;
      if (net && cell_status.empty()) {
        try {
          groups = load_groups(*net, cell);
        } catch (const Error& e) {
          cell_status = error_tag(e.kind());
        }
      }
      std::vector<Row> rows;
      for (Method m : methods) {
        Row row{std::string(method_name(m)), std::nullopt, 0.0, cell_status};
        if (groups) {
          try {
            bool proven = true;
            const TreePartitionSolution sol = run_method(*net, *groups, m, cell, &proven);
            row.objective = sol.disruption_mw;
            row.runtime = sol.runtime_s;
            row.status = proven ? "ok" : "limit";
          } catch (const Error& e) {
            row.status = error_tag(e.kind());
          }
        }
        rows.push_back(row);
      }
      std::optional<double> milp;
      for (const Row& r : rows) {
        if (r.method == "milp" && r.objective && r.status == "ok") milp = r.objective;
      }
      for (const Row& r : rows) {
        std::string pct;
        if (milp && r.objective) {
          if (*milp > 0.0) {
            pct = fmt("%.2f", 100.0 * (*r.objective - *milp) / *milp);
          } else if (*r.objective == *milp) {
            pct = "0.00";
          }
        }
        if (pct == "-0.00") pct = "0.00";
        csv += spec + "," + std::to_string(k) + "," + r.method + "," +
               (r.objective ? fmt("%.6f", *r.objective) : "") + "," +
               (config.no_timing || !r.objective ? "" : fmt("%.3f", r.runtime)) + "," +
               pct + "," + r.status + "\n";
      }
    }
  }
  return csv;
}

int cmd_bench(const RunConfig& config, std::ostream& out) {
  emit(config, out, bench_csv(config));
  return kExitOk;
}

std::string dot_string(const Network& net, const TreePartitionSolution& sol) {
  const auto problems = solution_problems(net, CoherencyGroups{}, sol);
  if (!problems.empty()) {
    throw InvalidArgument("solution does not fit the network: " + problems.front());
  }
  static const char* const kPalette[] = {
      "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
      "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f"};
  constexpr int kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);
  auto colour = [&](int r) -> std::string {
    if (r < kPaletteSize) return kPalette[r];
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f 0.45 0.95", std::fmod(r * 0.618033988749895, 1.0));
    return buf;
  };

  std::map<LineId, const char*> style;
  for (LineId id : sol.switched) style[id] = " [color=red, style=dashed]";
  for (LineId id : sol.retained_bridges) style[id] = " [penwidth=3]";

  std::ostringstream os;
  os << "graph treepart {\n"
     << "  graph [overlap=false];\n"
     << "  node [shape=circle, style=filled];\n";
  for (int i = 0; i < net.num_buses(); ++i) {
    os << "  \"" << net.bus(i).id << "\" [fillcolor=\""
       << colour(sol.partition.assignment[i]) << "\"];\n";
  }
  for (const Line& l : net.lines()) {
    os << "  \"" << net.bus(l.from).id << "\" -- \"" << net.bus(l.to).id << "\"";
    if (auto it = style.find(l.id); it != style.end()) os << it->second;
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

int cmd_export_dot(const RunConfig& config, std::ostream& out) {
  const Network net = require_case(config).network;
  if (config.solution.empty()) throw InvalidArgument("export-dot needs --solution");
  const TreePartitionSolution sol =
      solution_from_json(net, nlohmann::json::parse(read_text_file(config.solution)));
  emit(config, out, dot_string(net, sol));
  return kExitOk;
}

}  // namespace treepart::cli
