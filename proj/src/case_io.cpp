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

#include "treepart/case_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "treepart/error.hpp"

namespace treepart {
namespace {

struct Row {
  int line;
  std::vector<double> values;
};

struct Table {
  int line = 0;
  std::vector<Row> rows;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\'') quoted = !quoted;
    if (line[i] == '%' && !quoted) return line.substr(0, i);
  }
  return line;
}

double parse_number(std::string_view token, int line,
                    const std::string& table) {
  std::string buf(token);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end == buf.c_str() || *end != '\0' || errno == ERANGE) {
    throw ParseError(line, "expected a number in mpc." + table + ", got '" +
                               buf + "'");
  }
  return v;
}

// Splits matrix text into rows. ';' and end of line both terminate a row.
void append_rows(std::string_view text, int line, const std::string& name,
                 Table& table) {
  std::size_t start = 0;
  while (start <= text.size()) {
    auto semi = text.find(';', start);
    std::string_view segment =
        text.substr(start, semi == std::string_view::npos ? std::string_view::npos
                                                          : semi - start);
    Row row{line, {}};
    std::size_t i = 0;
    while (i < segment.size()) {
      while (i < segment.size() &&
             (segment[i] == ' ' || segment[i] == '\t' || segment[i] == ',' ||
              segment[i] == '\r')) {
        ++i;
      }
      std::size_t j = i;
      while (j < segment.size() && segment[j] != ' ' && segment[j] != '\t' &&
             segment[j] != ',' && segment[j] != '\r') {
        ++j;
      }
      if (j > i) {
        row.values.push_back(parse_number(segment.substr(i, j - i), line, name));
      }
      i = j;
    }
    if (!row.values.empty()) table.rows.push_back(std::move(row));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
}

struct CaseTables {
  std::optional<double> base_mva;
  std::map<std::string, Table> tables;
  int last_line = 0;
};

CaseTables tokenize(std::string_view text) {
  CaseTables out;
  enum class Mode { kTop, kMatrix, kCell } mode = Mode::kTop;
  std::string current;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                       : eol - pos);
    ++lineno;
    std::string_view code = strip_comment(raw);

    while (true) {
      if (mode == Mode::kMatrix) {
        auto close = code.find(']');
        if (close == std::string_view::npos) {
          append_rows(code, lineno, current, out.tables[current]);
          break;
        }
        append_rows(code.substr(0, close), lineno, current, out.tables[current]);
        code = trim(code.substr(close + 1));
        if (!code.empty() && code.front() == ';') code.remove_prefix(1);
        mode = Mode::kTop;
        continue;
      }
      if (mode == Mode::kCell) {
        auto close = code.find('}');
        if (close == std::string_view::npos) break;
        code = trim(code.substr(close + 1));
        if (!code.empty() && code.front() == ';') code.remove_prefix(1);
        mode = Mode::kTop;
        continue;
      }
      code = trim(code);
      if (code.empty()) break;
      if (code.starts_with("function") || code == "end" || code == "return" ||
          code == "end;" || code == "return;") {
        break;
      }
      if (!code.starts_with("mpc.")) {
        throw ParseError(lineno, "unexpected statement '" + std::string(code) +
                                     "'");
      }
      auto eq = code.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError(lineno, "expected '=' in assignment");
      }
      const std::string name(trim(code.substr(4, eq - 4)));
      std::string_view rhs = trim(code.substr(eq + 1));
      if (rhs.starts_with("[")) {
        current = name;
        Table& table = out.tables[name];
        table.line = lineno;
        table.rows.clear();
        mode = Mode::kMatrix;
        code = rhs.substr(1);
        continue;
      }
      if (rhs.starts_with("{")) {
        mode = Mode::kCell;
        code = rhs.substr(1);
        continue;
      }
      if (name == "baseMVA") {
        std::string_view value = rhs;
        if (value.ends_with(";")) value.remove_suffix(1);
        out.base_mva = parse_number(trim(value), lineno, name);
      }
      break;
    }

    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  if (mode == Mode::kMatrix) {
    throw ParseError(lineno, "unterminated matrix mpc." + current);
  }
  if (mode == Mode::kCell) {
    throw ParseError(lineno, "unterminated cell array");
  }
  out.last_line = lineno;
  return out;
}

const Table& require_table(const CaseTables& t, const std::string& name) {
  auto it = t.tables.find(name);
  if (it == t.tables.end()) {
    throw ParseError(t.last_line, "missing mpc." + name + " table");
  }
  return it->second;
}

void require_columns(const Row& row, std::size_t count,
                     const std::string& table) {
  if (row.values.size() < count) {
    throw ParseError(row.line, "mpc." + table + " row has " +
                                   std::to_string(row.values.size()) +
                                   " columns, need at least " +
                                   std::to_string(count));
  }
}

int as_int(double v, int line, const std::string& what) {
  if (!std::isfinite(v) || v != std::floor(v)) {
    throw ParseError(line, what + " must be an integer");
  }
  return static_cast<int>(v);
}

// Linear cost coefficient from one gencost row.
double linear_cost(const Row& row) {
  if (row.values.size() < 4) return 0.0;
  const int model = static_cast<int>(row.values[0]);
  const int ncost = static_cast<int>(row.values[3]);
  if (model == 2) {
    // coefficients c_{n-1} ... c_0, highest order first
    if (ncost < 2 || row.values.size() < static_cast<std::size_t>(4 + ncost)) {
      return 0.0;
    }
    return row.values[4 + ncost - 2];
  }
  if (model == 1 && ncost >= 2 && row.values.size() >= 8) {
    const double dp = row.values[6] - row.values[4];
    return dp != 0.0 ? (row.values[7] - row.values[5]) / dp : 0.0;
  }
  return 0.0;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Network parse_case(std::string_view text) {
  const CaseTables t = tokenize(text);
  if (!t.base_mva) throw ParseError(t.last_line, "missing mpc.baseMVA");
  const Table& bus_table = require_table(t, "bus");
  const Table& gen_table = require_table(t, "gen");
  const Table& branch_table = require_table(t, "branch");

  std::vector<Bus> buses;
  std::map<int, int> index_of;
  std::map<int, int> isolated;
  for (const Row& row : bus_table.rows) {
    require_columns(row, 3, "bus");
    const int id = as_int(row.values[0], row.line, "BUS_I");
    const int type = as_int(row.values[1], row.line, "BUS_TYPE");
    if (index_of.count(id) || isolated.count(id)) {
      throw ValidationError("line " + std::to_string(row.line) +
                            ": duplicate bus id " + std::to_string(id));
    }
    if (type == 4) {
      isolated[id] = row.line;
      continue;
    }
    Bus b;
    b.id = id;
    b.index = static_cast<int>(buses.size());
    b.load_mw = row.values[2];
    index_of[id] = b.index;
    buses.push_back(b);
  }

  auto lookup = [&](double raw, int line, const char* what) -> std::optional<int> {
    const int id = as_int(raw, line, what);
    auto it = index_of.find(id);
    if (it != index_of.end()) return it->second;
    if (isolated.count(id)) return std::nullopt;
    throw ValidationError("line " + std::to_string(line) + ": " + what +
                          " references unknown bus " + std::to_string(id));
  };

  const Table* cost_table = nullptr;
  if (auto it = t.tables.find("gencost"); it != t.tables.end()) {
    cost_table = &it->second;
  }

  std::vector<Generator> generators;
  for (std::size_t g = 0; g < gen_table.rows.size(); ++g) {
    const Row& row = gen_table.rows[g];
    require_columns(row, 2, "gen");
    const auto bus = lookup(row.values[0], row.line, "GEN_BUS");
    const bool in_service = row.values.size() < 8 || row.values[7] > 0.0;
    if (!bus || !in_service) continue;
    Generator gen;
    gen.bus = *bus;
    gen.pg_mw = row.values[1];
    gen.pmax_mw = row.values.size() >= 9 ? row.values[8] : gen.pg_mw;
    gen.pmin_mw = row.values.size() >= 10 ? row.values[9] : 0.0;
    if (cost_table && g < cost_table->rows.size()) {
      gen.cost_per_mwh = linear_cost(cost_table->rows[g]);
    }
    generators.push_back(gen);
  }

  std::vector<double> generation(buses.size(), 0.0);
  for (const Generator& g : generators) {
    generation[g.bus] += g.pg_mw;
    buses[g.bus].is_generator = true;
  }
  for (Bus& b : buses) b.injection_mw = generation[b.index] - b.load_mw;

  std::vector<RawBranch> raw;
  for (const Row& row : branch_table.rows) {
    require_columns(row, 4, "branch");
    const auto from = lookup(row.values[0], row.line, "F_BUS");
    const auto to = lookup(row.values[1], row.line, "T_BUS");
    const bool in_service = row.values.size() < 11 || row.values[10] > 0.0;
    if (!in_service) continue;
    if (!from || !to) {
      throw ValidationError("line " + std::to_string(row.line) +
                            ": in-service branch touches an isolated bus");
    }
    if (*from == *to) {
      throw ParseError(row.line, "branch connects a bus to itself");
    }
    const double x = row.values[3];
    if (x == 0.0 || !std::isfinite(x)) {
      throw ParseError(row.line, "branch reactance must be finite and nonzero");
    }
    RawBranch b;
    b.from = *from;
    b.to = *to;
    b.susceptance = 1.0 / x;
    if (row.values.size() >= 6 && row.values[5] > 0.0) {
      b.capacity_mw = row.values[5];
    }
    raw.push_back(b);
  }

  Network net(std::move(buses), merge_parallel(raw), *t.base_mva,
              std::move(generators));
  if (!is_connected(net)) {
    const auto label = connected_components(net);
    const int count = *std::max_element(label.begin(), label.end()) + 1;
    throw ValidationError("network is disconnected (" + std::to_string(count) +
                          " components)");
  }
  return net;
}

std::string write_case(const Network& net) {
  std::ostringstream out;
  out << "function mpc = treepart_case\n";
  out << "mpc.version = '2';\n";
  out << "mpc.baseMVA = " << format_double(net.base_mva()) << ";\n\n";
  out << "%% bus_i type Pd\n";
  out << "mpc.bus = [\n";
  for (const Bus& b : net.buses()) {
    out << "\t" << b.id << "\t" << (b.is_generator ? 2 : 1) << "\t"
        << format_double(b.load_mw) << ";\n";
  }
  out << "];\n\n";
  out << "%% bus Pg Qg Qmax Qmin Vg mBase status Pmax Pmin\n";
  out << "mpc.gen = [\n";
  for (const Generator& g : net.generators()) {
    out << "\t" << net.bus(g.bus).id << "\t" << format_double(g.pg_mw)
        << "\t0\t0\t0\t1\t" << format_double(net.base_mva()) << "\t1\t"
        << format_double(g.pmax_mw) << "\t" << format_double(g.pmin_mw)
        << ";\n";
  }
  out << "];\n\n";
  out << "%% fbus tbus r x b rateA rateB rateC ratio angle status\n";
  out << "mpc.branch = [\n";
  for (const Line& l : net.lines()) {
    out << "\t" << net.bus(l.from).id << "\t" << net.bus(l.to).id << "\t0\t"
        << format_double(1.0 / l.susceptance) << "\t0\t"
        << format_double(l.capacity_mw.value_or(0.0)) << "\t0\t0\t0\t0\t1;\n";
  }
  out << "];\n\n";
  out << "%% model startup shutdown n c1 c0\n";
  out << "mpc.gencost = [\n";
  for (const Generator& g : net.generators()) {
    out << "\t2\t0\t0\t2\t" << format_double(g.cost_per_mwh) << "\t0;\n";
  }
  out << "];\n";
  return out.str();
}

nlohmann::json network_to_json(const Network& net) {
  using nlohmann::json;
  json buses = json::array();
  for (const Bus& b : net.buses()) {
    buses.push_back({{"id", b.id},
                     {"injection_mw", b.injection_mw},
                     {"load_mw", b.load_mw},
                     {"is_generator", b.is_generator}});
  }
  json lines = json::array();
  for (const Line& l : net.lines()) {
    lines.push_back({{"from", net.bus(l.from).id},
                     {"to", net.bus(l.to).id},
                     {"susceptance", l.susceptance},
                     {"flow_mw", l.flow_mw},
                     {"capacity_mw", l.capacity_mw ? json(*l.capacity_mw)
                                                   : json(nullptr)}});
  }
  json gens = json::array();
  for (const Generator& g : net.generators()) {
    gens.push_back({{"bus", net.bus(g.bus).id},
                    {"pg_mw", g.pg_mw},
                    {"pmin_mw", g.pmin_mw},
                    {"pmax_mw", g.pmax_mw},
                    {"cost_per_mwh", g.cost_per_mwh}});
  }
  return {{"buses", buses},
          {"lines", lines},
          {"base_mva", net.base_mva()},
          {"generators", gens}};
}

Network network_from_json(const nlohmann::json& j) {
  try {
    std::vector<Bus> buses;
    std::map<int, int> index_of;
    for (const auto& jb : j.at("buses")) {
      Bus b;
      b.id = jb.at("id").get<int>();
      b.index = static_cast<int>(buses.size());
      b.injection_mw = jb.at("injection_mw").get<double>();
      b.load_mw = jb.value("load_mw", 0.0);
      b.is_generator = jb.value("is_generator", false);
      if (!index_of.emplace(b.id, b.index).second) {
        throw ValidationError("duplicate bus id " + std::to_string(b.id));
      }
      buses.push_back(b);
    }
    auto index = [&](int id) {
      auto it = index_of.find(id);
      if (it == index_of.end()) {
        throw ValidationError("line references unknown bus " +
                              std::to_string(id));
      }
      return it->second;
    };
    std::vector<Line> lines;
    for (const auto& jl : j.at("lines")) {
      Line l;
      l.id = static_cast<LineId>(lines.size());
      l.from = index(jl.at("from").get<int>());
      l.to = index(jl.at("to").get<int>());
      l.susceptance = jl.at("susceptance").get<double>();
      l.flow_mw = jl.at("flow_mw").get<double>();
      if (jl.contains("capacity_mw") && !jl["capacity_mw"].is_null()) {
        l.capacity_mw = jl["capacity_mw"].get<double>();
      }
      lines.push_back(l);
    }
    std::vector<Generator> gens;
    if (j.contains("generators")) {
      for (const auto& jg : j["generators"]) {
        Generator g;
        g.bus = index(jg.at("bus").get<int>());
        g.pg_mw = jg.at("pg_mw").get<double>();
        g.pmin_mw = jg.value("pmin_mw", 0.0);
        g.pmax_mw = jg.value("pmax_mw", g.pg_mw);
        g.cost_per_mwh = jg.value("cost_per_mwh", 0.0);
        gens.push_back(g);
      }
    }
    Network net(std::move(buses), std::move(lines),
                j.at("base_mva").get<double>(), std::move(gens));
    if (!is_connected(net)) throw ValidationError("network is disconnected");
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed network JSON: ") + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

Network load_network(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  if (path.extension() == ".json") {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(0, std::string("invalid JSON: ") + e.what());
    }
    return network_from_json(j);
  }
  return parse_case(text);
}

}  // namespace treepart
