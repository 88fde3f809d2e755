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

#include "treepart/milp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <queue>
#include <sstream>

#include "treepart/case_io.hpp"
#include "treepart/error.hpp"

namespace treepart {

int MilpModel::add_variable(std::string name, VarKind kind, double lower,
                            double upper) {
  if (index_.count(name)) {
    throw ModelBuildError("duplicate variable " + name);
  }
  const int id = static_cast<int>(variables.size());
  index_.emplace(name, id);
  variables.push_back({std::move(name), kind, lower, upper});
  return id;
}

void MilpModel::add_constraint(std::string name, std::vector<Term> terms,
                               Sense sense, double rhs) {
  constraints.push_back({std::move(name), std::move(terms), sense, rhs});
}

int MilpModel::find_variable(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? -1 : it->second;
}

int MilpModel::count(VarKind kind) const {
  return static_cast<int>(std::count_if(
      variables.begin(), variables.end(),
      [kind](const Variable& v) { return v.kind == kind; }));
}

double MilpModel::objective_value(std::span<const double> values) const {
  double total = objective_constant;
  for (const Term& t : objective) total += t.coef * values[t.var];
  return total;
}

std::vector<std::string> violated_constraints(const MilpModel& model,
                                              std::span<const double> values,
                                              double tol) {
  if (values.size() != model.variables.size()) {
    throw InvalidArgument("value vector has " + std::to_string(values.size()) +
                          " entries, model has " +
                          std::to_string(model.variables.size()) + " variables");
  }
  std::vector<std::string> bad;
  for (std::size_t v = 0; v < values.size(); ++v) {
    const Variable& var = model.variables[v];
    const double x = values[v];
    if (x < var.lower - tol || x > var.upper + tol) {
      bad.push_back("bound " + var.name);
    } else if (var.kind == VarKind::kBinary && std::abs(x - std::round(x)) > tol) {
      bad.push_back("integrality " + var.name);
    }
  }
  for (const Constraint& c : model.constraints) {
    double lhs = 0.0;
    for (const Term& t : c.terms) lhs += t.coef * values[t.var];
    const bool ok = (c.sense == Sense::kLessEqual && lhs <= c.rhs + tol) ||
                    (c.sense == Sense::kGreaterEqual && lhs >= c.rhs - tol) ||
                    (c.sense == Sense::kEqual && std::abs(lhs - c.rhs) <= tol);
    if (!ok) bad.push_back(c.name);
  }
  return bad;
}

namespace {

std::string bus_tag(const Network& net, int bus) {
  return std::to_string(net.bus(bus).id);
}

std::string line_tag(const Network& net, const Line& l) {
  return bus_tag(net, l.from) + "_" + bus_tag(net, l.to);
}

}  // namespace

TreePartitionModel build_model(const Network& net, const CoherencyGroups& groups,
                               const SteinerFixings* ssr) {
  validate_groups(net, groups);
  TreePartitionModel tpm;
  const int n = tpm.n = net.num_buses();
  const int m = tpm.m = net.num_lines();
  const int k = tpm.k = groups.k();
  MilpModel& model = tpm.model;
  const auto lines = net.lines();
  for (const Line& l : lines) tpm.line_ids.push_back(l.id);

  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < k; ++r) {
      model.add_variable("x_" + bus_tag(net, i) + "_" + std::to_string(r + 1),
                         VarKind::kBinary, 0.0, 1.0);
    }
  }
  for (const Line& l : lines) {
    for (int r = 0; r < k; ++r) {
      model.add_variable("y_" + line_tag(net, l) + "_" + std::to_string(r + 1),
                         VarKind::kBinary, 0.0, 1.0);
    }
  }
  for (const Line& l : lines) {
    model.add_variable("z_" + line_tag(net, l), VarKind::kBinary, 0.0, 1.0);
  }
  for (const Line& l : lines) {
    model.add_variable("w_" + line_tag(net, l), VarKind::kBinary, 0.0, 1.0);
  }
  const double cap = n - 1;
  for (const Line& l : lines) {
    model.add_variable("q_" + line_tag(net, l), VarKind::kContinuous, -cap, cap);
  }

  // Disruption = sum |f| - sum |f| z; the constant part lives outside the
  // linear objective.
  for (int e = 0; e < m; ++e) {
    const double weight = std::abs(lines[e].flow_mw);
    model.objective_constant += weight;
    model.objective.push_back({tpm.z(e), -weight});
  }

  std::vector<int> fixed(n, -1);
  for (int r = 0; r < k; ++r) {
    for (int i : groups.groups[r]) {
      fixed[i] = r;
      model.add_constraint(
          "coh_" + bus_tag(net, i) + "_" + std::to_string(r + 1),
          {{tpm.x(i, r), 1.0}}, Sense::kEqual, 1.0);
    }
  }

  for (int i = 0; i < n; ++i) {
    std::vector<Term> terms;
    for (int r = 0; r < k; ++r) terms.push_back({tpm.x(i, r), 1.0});
    model.add_constraint("assign_" + bus_tag(net, i), std::move(terms),
                         Sense::kEqual, 1.0);
  }

  for (int e = 0; e < m; ++e) {
    const Line& l = lines[e];
    const std::string tag = line_tag(net, l);
    std::vector<Term> active;
    for (int r = 0; r < k; ++r) {
      const std::string rt = tag + "_" + std::to_string(r + 1);
      model.add_constraint("and1_" + rt, {{tpm.y(e, r), 1.0}, {tpm.x(l.from, r), -1.0}},
                           Sense::kLessEqual, 0.0);
      model.add_constraint("and2_" + rt, {{tpm.y(e, r), 1.0}, {tpm.x(l.to, r), -1.0}},
                           Sense::kLessEqual, 0.0);
      model.add_constraint("and3_" + rt,
                           {{tpm.y(e, r), 1.0},
                            {tpm.x(l.from, r), -1.0},
                            {tpm.x(l.to, r), -1.0}},
                           Sense::kGreaterEqual, -1.0);
      active.push_back({tpm.y(e, r), 1.0});
    }
    active.push_back({tpm.w(e), 1.0});
    active.push_back({tpm.z(e), -1.0});
    model.add_constraint("active_" + tag, std::move(active), Sense::kEqual, 0.0);
  }

  {
    std::vector<Term> terms;
    for (int e = 0; e < m; ++e) terms.push_back({tpm.w(e), 1.0});
    model.add_constraint("bridges", std::move(terms), Sense::kEqual, k - 1.0);
  }

  // Commodity flow q is oriented from -> to, so the net outflow of bus i
  // is the sum over lines leaving i minus the sum over lines entering i.
  std::vector<std::vector<Term>> outflow(n);
  for (int e = 0; e < m; ++e) {
    outflow[lines[e].from].push_back({tpm.q(e), 1.0});
    outflow[lines[e].to].push_back({tpm.q(e), -1.0});
  }
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      model.add_constraint("source", std::move(outflow[i]), Sense::kEqual, cap);
    } else {
      model.add_constraint("demand_" + bus_tag(net, i), std::move(outflow[i]),
                           Sense::kEqual, -1.0);
    }
  }
  for (int e = 0; e < m; ++e) {
    const std::string tag = line_tag(net, lines[e]);
    model.add_constraint("caplo_" + tag, {{tpm.q(e), 1.0}, {tpm.z(e), cap}},
                         Sense::kGreaterEqual, 0.0);
    model.add_constraint("caphi_" + tag, {{tpm.q(e), 1.0}, {tpm.z(e), -cap}},
                         Sense::kLessEqual, 0.0);
  }

  if (ssr != nullptr) {
    for (const auto& [bus, r] : ssr->bus_fix) {
      if (bus < 0 || bus >= n || r < 0 || r >= k) {
        throw ModelBuildError("bus fixing out of range");
      }
      if (fixed[bus] >= 0 && fixed[bus] != r) {
        throw ModelBuildError("bus " + bus_tag(net, bus) + " fixed to clusters " +
                              std::to_string(fixed[bus] + 1) + " and " +
                              std::to_string(r + 1));
      }
      fixed[bus] = r;
      model.add_constraint("ssrx_" + bus_tag(net, bus) + "_" + std::to_string(r + 1),
                           {{tpm.x(bus, r), 1.0}}, Sense::kEqual, 1.0);
    }
    for (const auto& [id, r] : ssr->edge_fix) {
      const auto pos = net.line_position(id);
      if (!pos || r < 0 || r >= k) {
        throw ModelBuildError("line fixing out of range");
      }
      const Line& l = lines[*pos];
      for (int end : {l.from, l.to}) {
        if (fixed[end] >= 0 && fixed[end] != r) {
          throw ModelBuildError("line " + line_tag(net, l) +
                                " fixed to a cluster its endpoint is not in");
        }
      }
      model.add_constraint("ssry_" + line_tag(net, l) + "_" + std::to_string(r + 1),
                           {{tpm.y(*pos, r), 1.0}}, Sense::kEqual, 1.0);
    }
  }
  return tpm;
}

std::vector<double> encode_solution(const TreePartitionModel& tpm,
                                    const Network& net,
                                    const TreePartitionSolution& sol) {
  const int n = tpm.n, m = tpm.m, k = tpm.k;
  if (net.num_buses() != n || net.num_lines() != m || sol.partition.k != k) {
    throw InvalidArgument("solution does not match the model dimensions");
  }
  std::vector<double> values(tpm.model.variables.size(), 0.0);
  const auto& assign = sol.partition.assignment;
  for (int i = 0; i < n; ++i) values[tpm.x(i, assign[i])] = 1.0;

  std::vector<char> off(m, 0);
  for (LineId id : sol.switched) off[*net.line_position(id)] = 1;
  std::vector<char> bridge(m, 0);
  for (LineId id : sol.retained_bridges) bridge[*net.line_position(id)] = 1;

  const auto lines = net.lines();
  for (int e = 0; e < m; ++e) {
    if (off[e]) continue;
    values[tpm.z(e)] = 1.0;
    const int a = assign[lines[e].from], b = assign[lines[e].to];
    if (a == b) {
      values[tpm.y(e, a)] = 1.0;
    } else if (bridge[e]) {
      values[tpm.w(e)] = 1.0;
    }
  }

  // BFS tree of the post-switching network rooted at bus 0; each tree edge
  // ships the size of the subtree below it.
  std::vector<int> parent_line(n, -1), order;
  std::vector<char> seen(n, 0);
  order.reserve(n);
  seen[0] = 1;
  order.push_back(0);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const int u = order[head];
    for (const Incidence& inc : net.neighbors(u)) {
      if (off[inc.line] || seen[inc.neighbor]) continue;
      seen[inc.neighbor] = 1;
      parent_line[inc.neighbor] = inc.line;
      order.push_back(inc.neighbor);
    }
  }
  std::vector<double> subtree(n, 1.0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    const int e = parent_line[v];
    if (e < 0) continue;
    const int up = lines[e].from == v ? lines[e].to : lines[e].from;
    subtree[up] += subtree[v];
    values[tpm.q(e)] = lines[e].to == v ? subtree[v] : -subtree[v];
  }
  return values;
}

TreePartitionSolution decode_solution(const TreePartitionModel& tpm,
                                      const Network& net,
                                      std::span<const double> values,
                                      Method method) {
  if (values.size() != tpm.model.variables.size()) {
    throw InvalidArgument("value vector does not match the model");
  }
  Partition p;
  p.k = tpm.k;
  p.assignment.resize(tpm.n);
  for (int i = 0; i < tpm.n; ++i) {
    int best = 0;
    for (int r = 1; r < tpm.k; ++r) {
      if (values[tpm.x(i, r)] > values[tpm.x(i, best)]) best = r;
    }
    p.assignment[i] = best;
  }
  std::vector<LineId> switched;
  for (int e = 0; e < tpm.m; ++e) {
    if (values[tpm.z(e)] < 0.5) switched.push_back(tpm.line_ids[e]);
  }
  return make_solution(net, std::move(p), std::move(switched), method);
}

namespace {

constexpr std::size_t kWrapColumn = 200;

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

// Appends tokens to a logical line, wrapping before kWrapColumn.
class LineWriter {
 public:
  explicit LineWriter(std::string& out) : out_(out) {}
  void begin(const std::string& head) {
    out_ += head;
    width_ = head.size();
  }
  void add(const std::string& token) {
    if (width_ + token.size() + 1 > kWrapColumn) {
      out_ += "\n  ";
      width_ = 2;
    } else {
      out_ += ' ';
      ++width_;
    }
    out_ += token;
    width_ += token.size();
  }
  void end() { out_ += '\n'; }

 private:
  std::string& out_;
  std::size_t width_ = 0;
};

void write_terms(const MilpModel& model, std::vector<Term> terms, LineWriter& w) {
  std::sort(terms.begin(), terms.end(), [&](const Term& a, const Term& b) {
    return model.variables[a.var].name < model.variables[b.var].name;
  });
  // LP readers reject a variable listed twice in one row.
  std::vector<Term> merged;
  for (const Term& t : terms) {
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  for (const Term& t : merged) {
    w.add(std::string(t.coef < 0 ? "-" : "+") + " " + fmt(std::abs(t.coef)) +
          " " + model.variables[t.var].name);
  }
}

}  // namespace

std::string to_lp_string(const MilpModel& model) {
  std::string out;
  {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", model.objective_constant);
    out += "\\ objective constant: ";
    out += buf;
    out += '\n';
  }
  LineWriter w(out);
  out += "Minimize\n";
  w.begin(" obj:");
  write_terms(model, model.objective, w);
  w.end();

  out += "Subject To\n";
  std::vector<const Constraint*> rows;
  for (const Constraint& c : model.constraints) rows.push_back(&c);
  std::sort(rows.begin(), rows.end(),
            [](const Constraint* a, const Constraint* b) { return a->name < b->name; });
  for (const Constraint* c : rows) {
    w.begin(" " + c->name + ":");
    write_terms(model, c->terms, w);
    w.add(c->sense == Sense::kLessEqual      ? "<="
          : c->sense == Sense::kGreaterEqual ? ">="
                                             : "=");
    w.add(fmt(c->rhs));
    w.end();
  }

  std::vector<const Variable*> vars;
  for (const Variable& v : model.variables) vars.push_back(&v);
  std::sort(vars.begin(), vars.end(),
            [](const Variable* a, const Variable* b) { return a->name < b->name; });
  out += "Bounds\n";
  for (const Variable* v : vars) {
    if (v->kind == VarKind::kBinary && v->lower == 0.0 && v->upper == 1.0) continue;
    if (std::isinf(v->lower) && v->lower < 0 && std::isinf(v->upper) && v->upper > 0) {
      out += " " + v->name + " free\n";
    } else {
      out += " " + fmt(v->lower) + " <= " + v->name + " <= " + fmt(v->upper) + "\n";
    }
  }
  out += "Binary\n";
  for (const Variable* v : vars) {
    if (v->kind == VarKind::kBinary) out += " " + v->name + "\n";
  }
  out += "End\n";
  return out;
}

void export_lp(const MilpModel& model, const std::filesystem::path& path) {
  write_text_file(path, to_lp_string(model));
}

namespace {

struct Token {
  std::string text;
  int line;
};

enum class Section { kNone, kObjective, kConstraints, kBounds, kBinary, kEnd };

std::string lower(std::string_view s) {
  std::string r(s);
  for (char& c : r) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return r;
}

bool is_number(const std::string& t) {
  if (t.empty()) return false;
  const std::string l = lower(t);
  if (l == "inf" || l == "+inf" || l == "-inf" || l == "infinity" ||
      l == "+infinity" || l == "-infinity") {
    return true;
  }
  std::size_t i = (t[0] == '+' || t[0] == '-') ? 1 : 0;
  return i < t.size() && (std::isdigit(static_cast<unsigned char>(t[i])) || t[i] == '.');
}

double to_number(const Token& t) {
  const std::string l = lower(t.text);
  if (l == "inf" || l == "+inf" || l == "infinity" || l == "+infinity") {
    return std::numeric_limits<double>::infinity();
  }
  if (l == "-inf" || l == "-infinity") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(t.text, &used);
    if (used == t.text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(t.line, "bad number '" + t.text + "'");
}

void tokenize(const std::string& text, int line_no, std::vector<Token>& out) {
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '<' || c == '>' || c == '=') {
      std::string op(1, c);
      if (i + 1 < text.size() && text[i + 1] == '=') {
        op += '=';
        ++i;
      }
      if (op == "=<") op = "<=";
      if (op == "=>") op = ">=";
      if (op == "<") op = "<=";
      if (op == ">") op = ">=";
      out.push_back({op, line_no});
      ++i;
    } else if (c == ':' || c == '+' || c == '-') {
      out.push_back({std::string(1, c), line_no});
      ++i;
    } else {
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
             std::string_view("<>=:+-").find(text[j]) == std::string_view::npos) {
        // Keep exponent signs inside numbers such as 1e-05.
        ++j;
        if (j < text.size() && (text[j] == '+' || text[j] == '-') &&
            (text[j - 1] == 'e' || text[j - 1] == 'E') &&
            (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) {
          ++j;
        }
      }
      out.push_back({text.substr(i, j - i), line_no});
      i = j;
    }
  }
}

class TermReader {
 public:
  TermReader(MilpModel& model, const std::vector<Token>& toks, std::size_t& pos)
      : model_(model), toks_(toks), pos_(pos) {}

  bool at_sense() const {
    const std::string& t = toks_[pos_].text;
    return t == "<=" || t == ">=" || t == "=";
  }

  // Reads "[+|-] [coef] name" sequences until a sense operator, a label or
  // the end of the tokens.
  std::vector<Term> read(bool stop_at_label) {
    std::vector<Term> terms;
    while (pos_ < toks_.size() && !at_sense()) {
      if (stop_at_label && pos_ + 1 < toks_.size() && toks_[pos_ + 1].text == ":") {
        break;
      }
      double sign = 1.0;
      while (toks_[pos_].text == "+" || toks_[pos_].text == "-") {
        if (toks_[pos_].text == "-") sign = -sign;
        if (++pos_ >= toks_.size()) throw ParseError(toks_.back().line, "dangling sign");
      }
      double coef = 1.0;
      if (is_number(toks_[pos_].text)) {
        coef = to_number(toks_[pos_]);
        if (++pos_ >= toks_.size()) {
          throw ParseError(toks_.back().line, "coefficient without variable");
        }
      }
      const Token& name = toks_[pos_];
      if (is_number(name.text) || name.text == ":" || at_sense()) {
        throw ParseError(name.line, "expected variable name, got '" + name.text + "'");
      }
      terms.push_back({variable(name.text), sign * coef});
      ++pos_;
    }
    return terms;
  }

  int variable(const std::string& name) {
    const int v = model_.find_variable(name);
    if (v >= 0) return v;
    return model_.add_variable(name, VarKind::kContinuous, 0.0,
                               std::numeric_limits<double>::infinity());
  }

 private:
  MilpModel& model_;
  const std::vector<Token>& toks_;
  std::size_t& pos_;
};

}  // namespace

MilpModel parse_lp(std::string_view text) {
  MilpModel model;
  bool maximize = false;
  Section section = Section::kNone;
  std::vector<Token> objective_toks, constraint_toks;
  std::vector<std::pair<std::vector<Token>, int>> bound_lines;
  std::vector<Token> binary_toks;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string constant_tag = "\\ objective constant:";
    if (raw.rfind(constant_tag, 0) == 0) {
      model.objective_constant =
          to_number({raw.substr(raw.find_first_not_of(' ', constant_tag.size())), line_no});
      continue;
    }
    std::string body = raw.substr(0, raw.find('\\'));
    const auto first = body.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = body.find_last_not_of(" \t\r");
    const std::string key = lower(body.substr(first, last - first + 1));
    if (key == "minimize" || key == "minimum" || key == "min") {
      section = Section::kObjective;
      continue;
    }
    if (key == "maximize" || key == "maximum" || key == "max") {
      section = Section::kObjective;
      maximize = true;
      continue;
    }
    if (key == "subject to" || key == "such that" || key == "st" || key == "s.t.") {
      section = Section::kConstraints;
      continue;
    }
    if (key == "bounds" || key == "bound") {
      section = Section::kBounds;
      continue;
    }
    if (key == "binary" || key == "binaries" || key == "bin") {
      section = Section::kBinary;
      continue;
    }
    if (key == "general" || key == "generals" || key == "gen" ||
        key == "semi-continuous" || key == "sos") {
      throw ParseError(line_no, "section '" + key + "' is not supported");
    }
    if (key == "end") {
      section = Section::kEnd;
      continue;
    }
    switch (section) {
      case Section::kNone:
        throw ParseError(line_no, "text before the objective section");
      case Section::kEnd:
        throw ParseError(line_no, "text after End");
      case Section::kObjective:
        tokenize(body, line_no, objective_toks);
        break;
      case Section::kConstraints:
        tokenize(body, line_no, constraint_toks);
        break;
      case Section::kBounds: {
        std::vector<Token> toks;
        tokenize(body, line_no, toks);
        bound_lines.emplace_back(std::move(toks), line_no);
        break;
      }
      case Section::kBinary:
        tokenize(body, line_no, binary_toks);
        break;
    }
  }
  if (section != Section::kEnd) throw ParseError(line_no, "missing End");

  {
    std::size_t pos = 0;
    if (objective_toks.size() >= 2 && objective_toks[1].text == ":") pos = 2;
    TermReader reader(model, objective_toks, pos);
    model.objective = reader.read(false);
    if (pos != objective_toks.size()) {
      throw ParseError(objective_toks[pos].line, "unexpected token in objective");
    }
    if (maximize) {
      for (Term& t : model.objective) t.coef = -t.coef;
      model.objective_constant = -model.objective_constant;
    }
  }

  {
    std::size_t pos = 0;
    int unnamed = 0;
    while (pos < constraint_toks.size()) {
      std::string name;
      if (pos + 1 < constraint_toks.size() && constraint_toks[pos + 1].text == ":") {
        name = constraint_toks[pos].text;
        pos += 2;
      } else {
        name = "R" + std::to_string(++unnamed);
      }
      TermReader reader(model, constraint_toks, pos);
      std::vector<Term> terms = reader.read(true);
      if (pos >= constraint_toks.size() || !reader.at_sense()) {
        throw ParseError(constraint_toks[std::min(pos, constraint_toks.size() - 1)].line,
                         "constraint " + name + " has no sense");
      }
      const std::string op = constraint_toks[pos++].text;
      double sign = 1.0;
      while (pos < constraint_toks.size() &&
             (constraint_toks[pos].text == "+" || constraint_toks[pos].text == "-")) {
        if (constraint_toks[pos].text == "-") sign = -sign;
        ++pos;
      }
      if (pos >= constraint_toks.size() || !is_number(constraint_toks[pos].text)) {
        throw ParseError(constraint_toks.back().line,
                         "constraint " + name + " has no right-hand side");
      }
      const double rhs = sign * to_number(constraint_toks[pos++]);
      const Sense sense = op == "<=" ? Sense::kLessEqual
                          : op == ">=" ? Sense::kGreaterEqual
                                       : Sense::kEqual;
      model.add_constraint(std::move(name), std::move(terms), sense, rhs);
    }
  }

  std::vector<char> bounded;
  auto var_for = [&](const Token& t) {
    if (is_number(t.text)) throw ParseError(t.line, "expected variable in bound");
    std::size_t dummy = 0;
    const std::vector<Token> none;
    TermReader reader(model, none, dummy);
    const int v = reader.variable(t.text);
    if (bounded.size() <= static_cast<std::size_t>(v)) bounded.resize(v + 1, 0);
    bounded[v] = 1;
    return v;
  };
  // Merges "+ 3" / "- inf" pairs into single signed number tokens.
  auto fold_signs = [](const std::vector<Token>& toks) {
    std::vector<Token> out;
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if ((toks[i].text == "+" || toks[i].text == "-") && i + 1 < toks.size() &&
          is_number(toks[i + 1].text)) {
        std::string num = toks[i + 1].text;
        if (num[0] == '+' || num[0] == '-') {
          num = (num[0] == toks[i].text[0] ? "+" : "-") + num.substr(1);
        } else {
          num = toks[i].text + num;
        }
        out.push_back({num, toks[i].line});
        ++i;
      } else {
        out.push_back(toks[i]);
      }
    }
    return out;
  };
  for (const auto& [raw_toks, ln] : bound_lines) {
    const std::vector<Token> t = fold_signs(raw_toks);
    auto text = [&](std::size_t i) { return i < t.size() ? t[i].text : std::string(); };
    if (t.size() == 2 && lower(t[1].text) == "free") {
      Variable& v = model.variables[var_for(t[0])];
      v.lower = -std::numeric_limits<double>::infinity();
      v.upper = std::numeric_limits<double>::infinity();
    } else if (t.size() == 5 && is_number(text(0)) && text(1) == "<=" &&
               text(3) == "<=" && is_number(text(4))) {
      Variable& v = model.variables[var_for(t[2])];
      v.lower = to_number(t[0]);
      v.upper = to_number(t[4]);
    } else if (t.size() == 3 && !is_number(text(0)) && is_number(text(2))) {
      Variable& v = model.variables[var_for(t[0])];
      const double b = to_number(t[2]);
      if (text(1) == "<=") v.upper = b;
      else if (text(1) == ">=") v.lower = b;
      else v.lower = v.upper = b;
    } else if (t.size() == 3 && is_number(text(0)) && !is_number(text(2))) {
      Variable& v = model.variables[var_for(t[2])];
      const double b = to_number(t[0]);
      if (text(1) == "<=") v.lower = b;
      else if (text(1) == ">=") v.upper = b;
      else v.lower = v.upper = b;
    } else {
      throw ParseError(ln, "unsupported bound statement");
    }
  }
  for (const Token& t : binary_toks) {
    std::size_t dummy = 0;
    const std::vector<Token> none;
    TermReader reader(model, none, dummy);
    const int v = reader.variable(t.text);
    Variable& var = model.variables[v];
    var.kind = VarKind::kBinary;
    const bool explicit_bounds =
        static_cast<std::size_t>(v) < bounded.size() && bounded[v];
    if (!explicit_bounds) {
      var.lower = 0.0;
      var.upper = 1.0;
    }
  }
  return model;
}

}  // namespace treepart
