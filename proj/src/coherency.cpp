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

#include "treepart/coherency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "treepart/error.hpp"

namespace treepart {

void validate_groups(const Network& net, const CoherencyGroups& groups,
                     bool require_generators) {
  std::vector<int> owner(net.num_buses(), -1);
  for (int r = 0; r < groups.k(); ++r) {
    if (groups.groups[r].empty()) {
      throw InvalidArgument("coherent group " + std::to_string(r + 1) +
                            " is empty");
    }
    for (int bus : groups.groups[r]) {
      if (bus < 0 || bus >= net.num_buses()) {
        throw InvalidArgument("coherent group references unknown bus");
      }
      if (owner[bus] != -1) {
        throw InvalidArgument("bus " + std::to_string(net.bus(bus).id) +
                              " belongs to two coherent groups");
      }
      if (require_generators && !net.bus(bus).is_generator) {
        throw InvalidArgument("bus " + std::to_string(net.bus(bus).id) +
                              " in a coherent group is not a generator");
      }
      owner[bus] = r;
    }
  }
}

std::vector<int> group_labels(const Network& net, const CoherencyGroups& groups) {
  validate_groups(net, groups);
  std::vector<int> label(net.num_buses(), -1);
  for (int r = 0; r < groups.k(); ++r) {
    for (int bus : groups.groups[r]) label[bus] = r;
  }
  return label;
}

Eigen::MatrixXd susceptance_laplacian(const Network& net) {
  const int n = net.num_buses();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (const Line& l : net.lines()) {
    lap(l.from, l.from) += l.susceptance;
    lap(l.to, l.to) += l.susceptance;
    lap(l.from, l.to) -= l.susceptance;
    lap(l.to, l.from) -= l.susceptance;
  }
  return lap;
}

Eigen::MatrixXd kron_reduce(const Eigen::MatrixXd& laplacian,
                            const std::vector<int>& keep) {
  const int n = static_cast<int>(laplacian.rows());
  std::vector<char> kept(n, 0);
  for (int i : keep) kept[i] = 1;
  std::vector<int> eliminate;
  for (int i = 0; i < n; ++i) {
    if (!kept[i]) eliminate.push_back(i);
  }
  const int nk = static_cast<int>(keep.size());
  const int ne = static_cast<int>(eliminate.size());
  Eigen::MatrixXd l_kk(nk, nk), l_ke(nk, ne), l_ee(ne, ne);
  for (int a = 0; a < nk; ++a) {
    for (int b = 0; b < nk; ++b) l_kk(a, b) = laplacian(keep[a], keep[b]);
    for (int b = 0; b < ne; ++b) l_ke(a, b) = laplacian(keep[a], eliminate[b]);
  }
  for (int a = 0; a < ne; ++a) {
    for (int b = 0; b < ne; ++b) l_ee(a, b) = laplacian(eliminate[a], eliminate[b]);
  }
  if (ne == 0) return l_kk;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(l_ee);
  if (ldlt.info() != Eigen::Success) {
    throw SingularSystem("Kron reduction: eliminated block is singular");
  }
  Eigen::MatrixXd reduced = l_kk - l_ke * ldlt.solve(l_ke.transpose());
  return 0.5 * (reduced + reduced.transpose());
}

std::vector<int> farthest_first_seeds(const Eigen::MatrixXd& rows, int k) {
  const int n = static_cast<int>(rows.rows());
  if (k < 1 || k > n) throw InvalidArgument("cannot pick k seeds from the rows");
  if (k == 1) return {0};
  int best_a = 0, best_b = 1;
  double best = -1.0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double d = (rows.row(a) - rows.row(b)).squaredNorm();
      if (d > best) {
        best = d;
        best_a = a;
        best_b = b;
      }
    }
  }
  std::vector<int> seeds{best_a, best_b};
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  auto absorb = [&](int s) {
    for (int i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], (rows.row(i) - rows.row(s)).squaredNorm());
    }
  };
  absorb(best_a);
  absorb(best_b);
  while (static_cast<int>(seeds.size()) < k) {
    int pick = -1;
    for (int i = 0; i < n; ++i) {
      if (std::find(seeds.begin(), seeds.end(), i) != seeds.end()) continue;
      if (pick < 0 || nearest[i] > nearest[pick]) pick = i;
    }
    seeds.push_back(pick);
    absorb(pick);
  }
  return seeds;
}

KMeansResult kmeans(const Eigen::MatrixXd& rows, Eigen::MatrixXd centroids,
                    const std::vector<int>& pinned, int max_iterations) {
  const int n = static_cast<int>(rows.rows());
  const int k = static_cast<int>(centroids.rows());
  KMeansResult result;
  result.labels.assign(n, -1);
  for (int iter = 1; iter <= max_iterations; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int label = pinned.empty() ? -1 : pinned[i];
      if (label < 0) {
        double best = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
          const double d = (rows.row(i) - centroids.row(c)).squaredNorm();
          if (d < best) {
            best = d;
            label = c;
          }
        }
      }
      if (label != result.labels[i]) {
        result.labels[i] = label;
        changed = true;
      }
    }
    result.iterations = iter;
    if (!changed && iter > 1) return result;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, rows.cols());
    std::vector<int> count(k, 0);
    for (int i = 0; i < n; ++i) {
      sums.row(result.labels[i]) += rows.row(i);
      ++count[result.labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (count[c] > 0) {
        centroids.row(c) = sums.row(c) / count[c];
        continue;
      }
      // reseed an empty cluster with the worst-fitting free row
      int worst = -1;
      double worst_d = -1.0;
      for (int i = 0; i < n; ++i) {
        if (!pinned.empty() && pinned[i] >= 0) continue;
        if (count[result.labels[i]] <= 1) continue;
        const double d =
            (rows.row(i) - centroids.row(result.labels[i])).squaredNorm();
        if (d > worst_d) {
          worst_d = d;
          worst = i;
        }
      }
      if (worst < 0) continue;
      --count[result.labels[worst]];
      result.labels[worst] = c;
      count[c] = 1;
      centroids.row(c) = rows.row(worst);
    }
  }
  throw BudgetExceeded("k-means did not converge after " +
                       std::to_string(max_iterations) + " iterations");
}

CoherencyGroups slow_coherency(const Network& net, int k,
                               std::vector<double> inertia_h) {
  if (k < 2) throw InvalidArgument("slow coherency needs k >= 2");
  std::vector<int> gens;
  for (const Bus& b : net.buses()) {
    if (b.is_generator) gens.push_back(b.index);
  }
  const int ng = static_cast<int>(gens.size());
  if (k > ng) {
    throw InvalidArgument("k=" + std::to_string(k) + " exceeds the " +
                          std::to_string(ng) + " generator buses");
  }
  if (inertia_h.empty()) inertia_h.assign(ng, 1.0);
  if (static_cast<int>(inertia_h.size()) != ng) {
    throw InvalidArgument("need one inertia constant per generator bus");
  }
  for (double h : inertia_h) {
    if (!(h > 0.0)) throw InvalidArgument("inertia constants must be positive");
  }

  CoherencyGroups out;
  out.inertia_h = inertia_h;
  if (k == ng) {
    for (int g : gens) out.groups.push_back({g});
    return out;
  }

  const Eigen::MatrixXd reduced = kron_reduce(susceptance_laplacian(net), gens);
  const Eigen::VectorXd inv_sqrt_m =
      Eigen::Map<const Eigen::VectorXd>(inertia_h.data(), ng).cwiseSqrt().cwiseInverse();
  // M^{-1/2} L M^{-1/2} shares its spectrum with M^{-1} L
  Eigen::MatrixXd sym = inv_sqrt_m.asDiagonal() * reduced * inv_sqrt_m.asDiagonal();
  sym = 0.5 * (sym + sym.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::kSingular,
                "slow coherency: eigen-solve did not converge within " +
                    std::to_string(Eigen::SelfAdjointEigenSolver<
                                       Eigen::MatrixXd>::m_maxIterations *
                                   ng) +
                    " iterations");
  }
  Eigen::MatrixXd modes = inv_sqrt_m.asDiagonal() * eig.eigenvectors().leftCols(k);
  for (int c = 0; c < k; ++c) {
    Eigen::Index arg = 0;
    modes.col(c).cwiseAbs().maxCoeff(&arg);
    if (modes(arg, c) < 0) modes.col(c) *= -1.0;
  }

  const std::vector<int> seeds = farthest_first_seeds(modes, k);
  Eigen::MatrixXd centroids(k, k);
  for (int c = 0; c < k; ++c) centroids.row(c) = modes.row(seeds[c]);
  const KMeansResult km = kmeans(modes, centroids, {});

  std::vector<std::vector<int>> groups(k);
  for (int i = 0; i < ng; ++i) groups[km.labels[i]].push_back(gens[i]);
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  if (static_cast<int>(groups.size()) != k) {
    throw InfeasibleError("slow coherency produced fewer than k groups");
  }
  std::sort(groups.begin(), groups.end());
  out.groups = std::move(groups);
  return out;
}

nlohmann::json groups_to_json(const Network& net, const CoherencyGroups& groups) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& g : groups.groups) {
    nlohmann::json ids = nlohmann::json::array();
    for (int bus : g) ids.push_back(net.bus(bus).id);
    list.push_back(ids);
  }
  return {{"k", groups.k()}, {"groups", list}};
}

CoherencyGroups groups_from_json(const Network& net, const nlohmann::json& j) {
  try {
    CoherencyGroups out;
    for (const auto& g : j.at("groups")) {
      std::vector<int> members;
      for (const auto& id : g) {
        auto idx = net.bus_index(id.get<int>());
        if (!idx) throw InvalidArgument("groups file names unknown bus " + id.dump());
        members.push_back(*idx);
      }
      std::sort(members.begin(), members.end());
      out.groups.push_back(std::move(members));
    }
    if (j.contains("k") && j["k"].get<int>() != out.k()) {
      throw InvalidArgument("groups file: k does not match the group count");
    }
    validate_groups(net, out);
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed groups JSON: ") + e.what());
  }
}

}  // namespace treepart
