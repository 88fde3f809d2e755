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

#include <algorithm>
#include <limits>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "test_util.hpp"
#include "treepart/case_io.hpp"
#include "treepart/coherency.hpp"
#include "treepart/error.hpp"

namespace treepart {
namespace {

using testing::make_network;

Network with_susceptances(const Network& net, double scale, int weak_line = -1,
                          double weak = 1.0) {
  std::vector<Bus> buses(net.buses().begin(), net.buses().end());
  std::vector<Line> lines(net.lines().begin(), net.lines().end());
  for (Line& l : lines) l.susceptance *= scale;
  if (weak_line >= 0) lines[weak_line].susceptance = weak;
  return Network(buses, lines, net.base_mva());
}

// Two copies of a 4-bus ring with generators at two buses each, joined by
// one line between bus 4 and bus 5.
Network weak_tie() {
  std::vector<bool> gens = {true, false, true, false, true, false, true, false};
  const Network base = make_network(
      8,
      {{0, 1, 0}, {1, 2, 0}, {2, 3, 0}, {3, 0, 0}, {4, 5, 0}, {5, 6, 0}, {6, 7, 0}, {7, 4, 0},
       {3, 4, 0}},
      {}, gens);
  return with_susceptances(base, 1.0, 8, 0.05);
}

TEST(SlowCoherency, WeakTieSeparatesTheTwoSides) {
  const CoherencyGroups g = slow_coherency(weak_tie(), 2);
  ASSERT_EQ(g.k(), 2);
  EXPECT_EQ(g.groups[0], (std::vector<int>{0, 2}));
  EXPECT_EQ(g.groups[1], (std::vector<int>{4, 6}));
}

TEST(SlowCoherency, KEqualToGeneratorCountGivesSingletons) {
  const CoherencyGroups g = slow_coherency(weak_tie(), 4);
  ASSERT_EQ(g.k(), 4);
  for (int r = 0; r < 4; ++r) EXPECT_EQ(g.groups[r].size(), 1u);
}

TEST(SlowCoherency, BarbellMatchesExhaustiveEmbeddingSplit) {
  // Generators 1,2 on one triangle and 3,4 on another, the triangles joined
  // through a two-line path via bus 7.
  std::vector<bool> gens = {true, true, false, true, true, false, false};
  Network net = make_network(7,
                             {{0, 1, 0}, {1, 2, 0}, {0, 2, 0}, {3, 4, 0}, {4, 5, 0}, {3, 5, 0},
                              {2, 6, 0}, {5, 6, 0}},
                             {}, gens);
  net = with_susceptances(net, 1.0, 6, 3.0);

  // Independent embedding: dense Schur complement onto generator buses,
  // then the two smallest eigenvectors.
  const std::vector<int> g = {0, 1, 3, 4}, e = {2, 5, 6};
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(7, 7);
  for (const Line& l : net.lines()) {
    L(l.from, l.from) += l.susceptance;
    L(l.to, l.to) += l.susceptance;
    L(l.from, l.to) -= l.susceptance;
    L(l.to, l.from) -= l.susceptance;
  }
  auto block = [&](const std::vector<int>& r, const std::vector<int>& c) {
    Eigen::MatrixXd B(r.size(), c.size());
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j) B(i, j) = L(r[i], c[j]);
    return B;
  };
  const Eigen::MatrixXd red =
      block(g, g) - block(g, e) * block(e, e).inverse() * block(e, g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(red);
  const Eigen::MatrixXd emb = eig.eigenvectors().leftCols(2);

  double best = std::numeric_limits<double>::infinity();
  int best_mask = 0;
  for (int mask = 1; mask < 8; ++mask) {  // generator 0 stays in part 0
    double cost = 0.0;
    for (int side = 0; side < 2; ++side) {
      std::vector<int> rows;
      for (int i = 0; i < 4; ++i) {
        if (((mask << 1) >> i & 1) == side) rows.push_back(i);
      }
      if (rows.empty()) continue;
      Eigen::RowVectorXd c = Eigen::RowVectorXd::Zero(2);
      for (int i : rows) c += emb.row(i);
      c /= rows.size();
      for (int i : rows) cost += (emb.row(i) - c).squaredNorm();
    }
    if (cost < best) {
      best = cost;
      best_mask = mask;
    }
  }
  std::vector<std::vector<int>> expected(2);
  for (int i = 0; i < 4; ++i) expected[(best_mask << 1) >> i & 1].push_back(g[i]);

  const CoherencyGroups got = slow_coherency(net, 2);
  EXPECT_EQ(got.groups, expected);
  EXPECT_EQ(got.groups, (std::vector<std::vector<int>>{{0, 1}, {3, 4}}));
}

TEST(SlowCoherency, UniformSusceptanceScalingKeepsGroups) {
  const Network net = load_network(testing::case_path("case118.m"));
  for (int k : {2, 3, 5}) {
    EXPECT_EQ(slow_coherency(net, k).groups,
              slow_coherency(with_susceptances(net, 7.5), k).groups)
        << "k=" << k;
  }
}

TEST(SlowCoherency, OutputPartitionsGeneratorSubsetDeterministically) {
  const Network net = load_network(testing::case_path("case300.m"));
  const CoherencyGroups a = slow_coherency(net, 5);
  const CoherencyGroups b = slow_coherency(net, 5);
  EXPECT_EQ(a.groups, b.groups);
  std::vector<int> seen(net.num_buses(), 0);
  for (const auto& grp : a.groups) {
    EXPECT_FALSE(grp.empty());
    for (int bus : grp) {
      EXPECT_TRUE(net.bus(bus).is_generator);
      EXPECT_EQ(seen[bus]++, 0);
    }
  }
  EXPECT_NO_THROW(validate_groups(net, a, true));
}

TEST(SlowCoherency, RejectsBadK) {
  const Network net = weak_tie();
  EXPECT_THROW(slow_coherency(net, 5), InvalidArgument);
  EXPECT_THROW(slow_coherency(net, 1), InvalidArgument);
  EXPECT_THROW(slow_coherency(net, 2, {1.0, 1.0}), InvalidArgument);
}

TEST(KronReduce, MatchesSchurComplementAndKeepsZeroRowSums) {
  const Network net = load_network(testing::case_path("case_ieee30.m"));
  const Eigen::MatrixXd L = susceptance_laplacian(net);
  const std::vector<int> keep = {0, 1, 4, 7, 10, 12};
  const Eigen::MatrixXd red = kron_reduce(L, keep);
  std::vector<int> drop;
  for (int i = 0; i < L.rows(); ++i) {
    if (std::find(keep.begin(), keep.end(), i) == keep.end()) drop.push_back(i);
  }
  const Eigen::MatrixXd schur = L(keep, keep) - L(keep, drop) * L(drop, drop).inverse() * L(drop, keep);
  EXPECT_LT((red - schur).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT(red.rowwise().sum().cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((red - red.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(KMeans, PinnedRowsNeverMove) {
  Eigen::MatrixXd rows(4, 1);
  rows << 0.0, 1.0, 2.0, 10.0;
  Eigen::MatrixXd c(2, 1);
  c << 0.0, 2.0;
  // Row 1 is equidistant from both initial centroids.
  const KMeansResult r = kmeans(rows, c, {-1, -1, 0, -1});
  EXPECT_EQ(r.labels[2], 0);  // pinned even though it is far from cluster 0
  EXPECT_EQ(r.labels[1], 0);
  EXPECT_EQ(r.labels[3], 1);
}

TEST(Groups, JsonRoundTripAndValidation) {
  const Network net = weak_tie();
  const CoherencyGroups g = testing::groups_of({{0, 2}, {4}});
  const nlohmann::json j = groups_to_json(net, g);
  EXPECT_EQ(j["groups"][0], nlohmann::json({1, 3}));
  EXPECT_EQ(groups_from_json(net, j).groups, g.groups);
  EXPECT_THROW(validate_groups(net, testing::groups_of({{0, 2}, {2}})), InvalidArgument);
  EXPECT_THROW(validate_groups(net, testing::groups_of({{0}, {}})), InvalidArgument);
  EXPECT_THROW(validate_groups(net, testing::groups_of({{0, 1}}), true), InvalidArgument);
}

}  // namespace
}  // namespace treepart
