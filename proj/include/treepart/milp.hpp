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

// Solver-agnostic MILP representation, the tree partitioning formulation
// and a CPLEX-LP writer/reader.
//
// The formulation, for buses i, lines (i,j) and clusters r = 1..k:
//   minimize   sum |f_ij| (1 - z_ij)
//   x_ir = 1                      i in coherent group r
//   sum_r x_ir = 1                every bus in one cluster
//   y_ijr <= x_ir, y_ijr <= x_jr, y_ijr >= x_ir + x_jr - 1
//   sum_r y_ijr + w_ij = z_ij     internal lines stay active
//   sum w_ij = k - 1              k-1 active cross edges
//   single-commodity flow q from bus 0 (n-1 units out, 1 unit into every
//   other bus), -(n-1) z_ij <= q_ij <= (n-1) z_ij
// plus x_ir = 1 / y_ijr = 1 for Steiner fixings when given. The
// cross-edge cardinality constraint is one global row.

#ifndef TREEPART_MILP_HPP_
#define TREEPART_MILP_HPP_

#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "treepart/coherency.hpp"
#include "treepart/network.hpp"
#include "treepart/solution.hpp"
#include "treepart/steiner.hpp"

namespace treepart {

enum class VarKind { kBinary, kContinuous };
enum class Sense { kLessEqual, kGreaterEqual, kEqual };

struct Variable {
  std::string name;
  VarKind kind = VarKind::kContinuous;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
};

struct Term {
  int var;
  double coef;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::kEqual;
  double rhs = 0.0;
};

class MilpModel {
 public:
  int add_variable(std::string name, VarKind kind, double lower, double upper);
  void add_constraint(std::string name, std::vector<Term> terms, Sense sense,
                      double rhs);

  // -1 when absent.
  int find_variable(std::string_view name) const;

  std::vector<Variable> variables;
  std::vector<Constraint> constraints;
  std::vector<Term> objective;  // minimized
  double objective_constant = 0.0;

  int count(VarKind kind) const;
  double objective_value(std::span<const double> values) const;

 private:
  std::unordered_map<std::string, int> index_;
};

// Names of violated bounds, integrality requirements and constraints.
std::vector<std::string> violated_constraints(const MilpModel& model,
                                              std::span<const double> values,
                                              double tol = 1e-9);

// Variable layout of the tree partitioning model.
struct TreePartitionModel {
  MilpModel model;
  int n = 0;
  int m = 0;
  int k = 0;
  std::vector<LineId> line_ids;  // by line position

  int x(int bus, int r) const { return bus * k + r; }
  int y(int line_pos, int r) const { return n * k + line_pos * k + r; }
  int z(int line_pos) const { return n * k + m * k + line_pos; }
  int w(int line_pos) const { return n * k + m * k + m + line_pos; }
  int q(int line_pos) const { return n * k + m * k + 2 * m + line_pos; }
};

// Throws ModelBuildError when a bus or line is fixed to two clusters.
TreePartitionModel build_model(const Network& net, const CoherencyGroups& groups,
                               const SteinerFixings* ssr = nullptr);

// Full variable vector for a tree partition solution; q follows a BFS
// spanning tree of the post-switching network rooted at bus 0.
std::vector<double> encode_solution(const TreePartitionModel& tpm,
                                    const Network& net,
                                    const TreePartitionSolution& sol);

// Reads x (largest value per bus) and z (< 0.5 means switched). Does not
// validate.
TreePartitionSolution decode_solution(const TreePartitionModel& tpm,
                                      const Network& net,
                                      std::span<const double> values,
                                      Method method);

// CPLEX-LP text: Minimize / Subject To / Bounds / Binary / End, constraints,
// variables and terms in sorted name order, 12 significant digits. The
// objective constant is carried in a comment line.
std::string to_lp_string(const MilpModel& model);
void export_lp(const MilpModel& model, const std::filesystem::path& path);

// Reads the subset written by to_lp_string, plus Maximize objectives
// (negated on read) and one-sided bounds. Throws ParseError.
MilpModel parse_lp(std::string_view text);

}  // namespace treepart

#endif  // TREEPART_MILP_HPP_
