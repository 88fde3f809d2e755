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

#include "treepart/dcflow.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "treepart/error.hpp"

namespace treepart {

FlowSolution solve_dc(const Network& net, int slack) {
  const int n = net.num_buses();
  if (slack < 0 || slack >= n) throw InvalidArgument("slack bus out of range");
  if (!is_connected(net)) {
    throw SingularSystem("DC flow: network is disconnected");
  }
  // reduced index: buses after the slack shift down by one
  auto red = [slack](int i) { return i < slack ? i : i - 1; };

  FlowSolution sol;
  sol.slack_bus = slack;
  sol.theta = Eigen::VectorXd::Zero(n);
  sol.flows_mw = Eigen::VectorXd::Zero(net.num_lines());
  if (n > 1) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(4 * net.num_lines());
    for (const Line& l : net.lines()) {
      const double b = l.susceptance;
      const bool f = l.from != slack, t = l.to != slack;
      if (f) triplets.emplace_back(red(l.from), red(l.from), b);
      if (t) triplets.emplace_back(red(l.to), red(l.to), b);
      if (f && t) {
        triplets.emplace_back(red(l.from), red(l.to), -b);
        triplets.emplace_back(red(l.to), red(l.from), -b);
      }
    }
    Eigen::SparseMatrix<double> b_matrix(n - 1, n - 1);
    b_matrix.setFromTriplets(triplets.begin(), triplets.end());

    Eigen::VectorXd p(n - 1);
    for (int i = 0; i < n; ++i) {
      if (i != slack) p[red(i)] = net.bus(i).injection_mw / net.base_mva();
    }
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(b_matrix);
    if (ldlt.info() != Eigen::Success) {
      throw SingularSystem("DC flow: factorization failed");
    }
    const Eigen::VectorXd theta = ldlt.solve(p);
    if (ldlt.info() != Eigen::Success || !theta.allFinite()) {
      throw SingularSystem("DC flow: singular susceptance matrix");
    }
    for (int i = 0; i < n; ++i) {
      if (i != slack) sol.theta[i] = theta[red(i)];
    }
  }
  for (int pos = 0; pos < net.num_lines(); ++pos) {
    const Line& l = net.lines()[pos];
    sol.flows_mw[pos] =
        net.base_mva() * l.susceptance * (sol.theta[l.from] - sol.theta[l.to]);
  }
  return sol;
}

double balance_residual_pu(const Network& net, const FlowSolution& sol) {
  Eigen::VectorXd divergence = Eigen::VectorXd::Zero(net.num_buses());
  for (int pos = 0; pos < net.num_lines(); ++pos) {
    const Line& l = net.lines()[pos];
    divergence[l.from] += sol.flows_mw[pos];
    divergence[l.to] -= sol.flows_mw[pos];
  }
  double worst = 0.0;
  for (int i = 0; i < net.num_buses(); ++i) {
    if (i == sol.slack_bus) continue;
    worst = std::max(worst, std::abs(divergence[i] - net.bus(i).injection_mw) /
                                net.base_mva());
  }
  return worst;
}

Network balanced_dispatch(const Network& net) {
  if (net.generators().empty()) return net;
  std::vector<Generator> gens(net.generators().begin(), net.generators().end());
  double load = 0.0, generation = 0.0;
  for (const Bus& b : net.buses()) load += b.load_mw;
  for (const Generator& g : gens) generation += g.pg_mw;
  if (generation > 0.0) {
    const double scale = load / generation;
    for (Generator& g : gens) g.pg_mw *= scale;
  } else {
    for (Generator& g : gens) g.pg_mw = load / static_cast<double>(gens.size());
  }
  std::vector<double> per_bus(net.num_buses(), 0.0);
  for (const Generator& g : gens) per_bus[g.bus] += g.pg_mw;
  std::vector<Bus> buses(net.buses().begin(), net.buses().end());
  for (Bus& b : buses) b.injection_mw = per_bus[b.index] - b.load_mw;
  return Network(std::move(buses), {net.lines().begin(), net.lines().end()},
                 net.base_mva(), std::move(gens));
}

Network with_dc_flows(const Network& net, int slack) {
  const FlowSolution sol = solve_dc(net, slack);
  return with_flows(net, {sol.flows_mw.data(),
                          static_cast<std::size_t>(sol.flows_mw.size())});
}

nlohmann::json flows_to_json(const Network& net, const FlowSolution& sol) {
  return {{"slack", net.bus(sol.slack_bus).id},
          {"theta", std::vector<double>(sol.theta.begin(), sol.theta.end())},
          {"flows_mw",
           std::vector<double>(sol.flows_mw.begin(), sol.flows_mw.end())}};
}

LocalizationReport localization_delta(const Network& network,
                                      const Partition& partition, LineId line,
                                      double tol, int slack) {
  const Line& removed = network.line(line);
  const LineId ids[] = {line};
  const Network cut = apply_switching(network, ids);
  LocalizationReport report;
  report.cluster = partition.assignment[removed.from];
  if (!is_connected(cut)) {
    report.outcome = Localization::kIslanding;
    return report;
  }
  if (partition.assignment[removed.from] != partition.assignment[removed.to]) {
    throw InvalidArgument("line " + std::to_string(line) +
                          " is a cross edge, not internal to a cluster");
  }
  const FlowSolution before = solve_dc(network, slack);
  const FlowSolution after = solve_dc(cut, slack);
  const int r = report.cluster;
  for (int pos = 0; pos < cut.num_lines(); ++pos) {
    const Line& l = cut.lines()[pos];
    if (partition.assignment[l.from] == r && partition.assignment[l.to] == r) {
      continue;
    }
    const int old_pos = *network.line_position(l.id);
    report.max_outside_delta_mw =
        std::max(report.max_outside_delta_mw,
                 std::abs(after.flows_mw[pos] - before.flows_mw[old_pos]));
  }
  report.outcome = report.max_outside_delta_mw < tol ? Localization::kLocalized
                                                     : Localization::kPropagated;
  return report;
}

LocalizationReport check_localization(const Network& net,
                                      const TreePartitionSolution& sol,
                                      LineId line, double tol) {
  const Network post = apply_switching(net, sol.switched);
  return localization_delta(post, sol.partition, line, tol);
}

}  // namespace treepart
