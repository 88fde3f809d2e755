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

#include "treepart/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "treepart/error.hpp"
#include "treepart/twostage.hpp"

namespace treepart {
namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Tracks the bus-to-cluster assignment together with the components of
// every cluster's induced subgraph. All mutations go through set() so a
// branch can be undone by truncating the trail.
class Search {
 public:
  Search(const Network& net, int k, std::vector<int> fixed, const BnBOptions& opt)
      : net_(net),
        n_(net.num_buses()),
        k_(k),
        fixed_(std::move(fixed)),
        opt_(opt),
        assign_(n_, -1),
        parent_(n_),
        size_(n_, 1),
        open_(n_, 0),
        assigned_nbrs_(n_, 0),
        comps_(k, 0),
        closed_(k, 0),
        share_(static_cast<std::size_t>(n_) * k, 0.0),
        pair_max_(static_cast<std::size_t>(k) * k, -1.0),
        attached_(k, 0.0) {
    std::iota(parent_.begin(), parent_.end(), 0);
    for (const Line& l : net.lines()) weight_.push_back(std::abs(l.flow_mw));
    top_.reserve(k);
  }

  void seed_incumbent(const std::vector<int>& assignment, double value) {
    incumbent_ = assignment;
    incumbent_value_ = value;
  }

  // Pre-assigns the fixed buses; false if they already violate
  // connectivity.
  bool place_fixed() {
    for (int i = 0; i < n_; ++i) {
      if (fixed_[i] >= 0 && !place(i, fixed_[i])) return false;
    }
    return true;
  }

  void run() {
    start_ = Clock::now();
    root_bound_ = bound();
    explore();
  }

  bool has_incumbent() const { return !incumbent_.empty(); }
  const std::vector<int>& incumbent() const { return incumbent_; }
  double incumbent_value() const { return incumbent_value_; }
  double root_bound() const { return root_bound_; }
  std::int64_t nodes() const { return nodes_; }
  bool stopped() const { return stopped_; }

 private:
  int find(int x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }

  void set(int& slot, int value) {
    trail_.emplace_back(&slot, slot);
    slot = value;
  }

  void rollback(std::size_t mark) {
    while (trail_.size() > mark) {
      *trail_.back().first = trail_.back().second;
      trail_.pop_back();
    }
  }

  // A cluster may hold a component with no free neighbour only if that
  // component is the whole cluster.
  bool cluster_ok(int r) const { return closed_[r] == 0 || comps_[r] == 1; }

  bool place(int v, int r) {
    set(assign_[v], r);
    set(comps_[r], comps_[r] + 1);
    int own_open = 0;
    for (const Incidence& inc : net_.neighbors(v)) {
      const int u = inc.neighbor;
      set(assigned_nbrs_[u], assigned_nbrs_[u] + 1);
      if (assign_[u] < 0) {
        ++own_open;
      } else {
        const int c = find(u);
        set(open_[c], open_[c] - 1);
        if (open_[c] == 0) set(closed_[assign_[u]], closed_[assign_[u]] + 1);
      }
    }
    set(open_[v], own_open);
    if (own_open == 0) set(closed_[r], closed_[r] + 1);

    for (const Incidence& inc : net_.neighbors(v)) {
      const int u = inc.neighbor;
      if (assign_[u] != r) continue;
      int a = find(v), b = find(u);
      if (a == b) continue;
      if (size_[a] < size_[b]) std::swap(a, b);
      const int was_closed = (open_[a] == 0) + (open_[b] == 0);
      set(parent_[b], a);
      set(size_[a], size_[a] + size_[b]);
      set(open_[a], open_[a] + open_[b]);
      set(comps_[r], comps_[r] - 1);
      set(closed_[r], closed_[r] - was_closed + (open_[a] == 0));
    }

    if (!cluster_ok(r)) return false;
    for (const Incidence& inc : net_.neighbors(v)) {
      const int c = assign_[inc.neighbor];
      if (c >= 0 && !cluster_ok(c)) return false;
    }
    return true;
  }

  // max(A, B) with
  //   A = forced cross weight - maximum spanning forest of the forced part
  //       of the reduced graph (adding cross edges never lowers the value);
  //   B = forced cross weight + the cheapest cross weight each free bus
  //       must create toward its assigned neighbours - the k-1 heaviest
  //       edges that are or may become cross edges.
  double bound() {
    const auto lines = net_.lines();
    double forced = 0.0;
    std::fill(pair_max_.begin(), pair_max_.end(), -1.0);
    top_.clear();
    auto offer_top = [&](double w) {
      if (k_ <= 1) return;
      if (static_cast<int>(top_.size()) < k_ - 1) {
        top_.push_back(w);
        std::push_heap(top_.begin(), top_.end(), std::greater<>());
      } else if (w > top_.front()) {
        std::pop_heap(top_.begin(), top_.end(), std::greater<>());
        top_.back() = w;
        std::push_heap(top_.begin(), top_.end(), std::greater<>());
      }
    };
    for (std::size_t e = 0; e < lines.size(); ++e) {
      const int a = assign_[lines[e].from], b = assign_[lines[e].to];
      const double w = weight_[e];
      if (a >= 0 && b >= 0) {
        if (a == b) continue;
        forced += w;
        double& best = pair_max_[std::min(a, b) * k_ + std::max(a, b)];
        best = std::max(best, w);
        offer_top(w);
        continue;
      }
      offer_top(w);
      if (a >= 0) share_[static_cast<std::size_t>(lines[e].to) * k_ + a] += w;
      if (b >= 0) share_[static_cast<std::size_t>(lines[e].from) * k_ + b] += w;
    }

    double look_ahead = 0.0;
    for (int v = 0; v < n_; ++v) {
      if (assign_[v] >= 0) continue;
      double* s = &share_[static_cast<std::size_t>(v) * k_];
      double total = 0.0, keep = 0.0;
      for (int r = 0; r < k_; ++r) {
        total += s[r];
        keep = std::max(keep, s[r]);
        s[r] = 0.0;
      }
      look_ahead += total - keep;
    }
    double top_sum = 0.0;
    for (double w : top_) top_sum += w;

    // Kruskal over at most k(k-1)/2 cluster pairs.
    pairs_.clear();
    for (int a = 0; a < k_; ++a) {
      for (int b = a + 1; b < k_; ++b) {
        if (pair_max_[a * k_ + b] >= 0.0) pairs_.push_back({pair_max_[a * k_ + b], a, b});
      }
    }
    std::sort(pairs_.begin(), pairs_.end(),
              [](const PairEdge& x, const PairEdge& y) { return x.w > y.w; });
    small_uf_.resize(k_);
    std::iota(small_uf_.begin(), small_uf_.end(), 0);
    auto root = [&](int x) {
      while (small_uf_[x] != x) x = small_uf_[x];
      return x;
    };
    double forest = 0.0;
    for (const PairEdge& p : pairs_) {
      const int ra = root(p.a), rb = root(p.b);
      if (ra == rb) continue;
      small_uf_[ra] = rb;
      forest += p.w;
    }

    return std::max({0.0, forced - forest, forced + look_ahead - top_sum});
  }

  // The smallest assignment vector any completion of the current node can
  // reach, compared with the incumbent.
  bool completion_beats_incumbent() const {
    for (int i = 0; i < n_; ++i) {
      const int c = std::max(assign_[i], 0);
      if (c != incumbent_[i]) return c < incumbent_[i];
    }
    return false;
  }

  bool out_of_budget() {
    if (nodes_ > opt_.node_limit) return true;
    if ((nodes_ & 1023) == 0) {
      const double elapsed = std::chrono::duration<double>(Clock::now() - start_).count();
      if (elapsed > opt_.time_limit_s) return true;
    }
    return false;
  }

  void leaf() {
    Partition p{assign_, k_};
    const SpanningTreeSplit split = max_weight_spanning_tree(reduced_graph(net_, p));
    const double value = disruption(net_, split.switched);
    if (!incumbent_.empty()) {
      const double eps = objective_tie_tolerance(incumbent_value_);
      const bool better = value < incumbent_value_ - eps;
      const bool tie_win = value <= incumbent_value_ + eps && assign_ < incumbent_;
      if (!better && !tie_win) return;
    }
    incumbent_ = assign_;
    incumbent_value_ = value;
  }

  void explore() {
    ++nodes_;
    if (out_of_budget()) {
      stopped_ = true;
      return;
    }
    int next = -1;
    for (int i = 0; i < n_; ++i) {
      if (assign_[i] >= 0) continue;
      if (next < 0 || assigned_nbrs_[i] > assigned_nbrs_[next]) next = i;
    }
    const double lb = next < 0 && !opt_.observer ? 0.0 : bound();
    if (opt_.observer) opt_.observer(assign_, lb);
    if (next < 0) {
      leaf();
      return;
    }
    if (!incumbent_.empty()) {
      const double eps = objective_tie_tolerance(incumbent_value_);
      if (lb > incumbent_value_ + eps) return;
      if (lb >= incumbent_value_ - eps && !completion_beats_incumbent()) return;
    }

    std::fill(attached_.begin(), attached_.end(), 0.0);
    for (const Incidence& inc : net_.neighbors(next)) {
      const int c = assign_[inc.neighbor];
      if (c >= 0) attached_[c] += weight_[inc.line];
    }
    std::vector<int> order(k_);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return attached_[a] > attached_[b]; });
    for (int r : order) {
      const std::size_t mark = trail_.size();
      if (place(next, r)) explore();
      rollback(mark);
      if (stopped_) return;
    }
  }

  struct PairEdge {
    double w;
    int a, b;
  };

  const Network& net_;
  const int n_;
  const int k_;
  const std::vector<int> fixed_;
  const BnBOptions& opt_;
  std::vector<double> weight_;

  std::vector<int> assign_;
  std::vector<int> parent_;
  std::vector<int> size_;
  std::vector<int> open_;
  std::vector<int> assigned_nbrs_;
  std::vector<int> comps_;
  std::vector<int> closed_;
  std::vector<std::pair<int*, int>> trail_;

  std::vector<double> share_;
  std::vector<double> pair_max_;
  std::vector<double> attached_;
  std::vector<double> top_;
  std::vector<PairEdge> pairs_;
  std::vector<int> small_uf_;

  std::vector<int> incumbent_;
  double incumbent_value_ = kInf;
  double root_bound_ = 0.0;
  std::int64_t nodes_ = 0;
  bool stopped_ = false;
  Clock::time_point start_;
};

}  // namespace

std::pair<TreePartitionSolution, BnBStats> solve_builtin(
    const Network& net, const CoherencyGroups& groups, const SteinerFixings* ssr,
    const BnBOptions& options) {
  const auto start = Clock::now();
  validate_groups(net, groups);
  const int k = groups.k();
  std::vector<int> fixed = group_labels(net, groups);
  if (ssr != nullptr) {
    auto fix = [&](int bus, int r) {
      if (bus < 0 || bus >= net.num_buses() || r < 0 || r >= k) {
        throw ModelBuildError("fixing out of range");
      }
      if (fixed[bus] >= 0 && fixed[bus] != r) {
        throw ModelBuildError("bus " + std::to_string(net.bus(bus).id) +
                              " fixed to two clusters");
      }
      fixed[bus] = r;
    };
    for (const auto& [bus, r] : ssr->bus_fix) fix(bus, r);
    // An internal-edge fixing pins both endpoints to its cluster.
    for (const auto& [id, r] : ssr->edge_fix) {
      const Line& l = net.line(id);
      fix(l.from, r);
      fix(l.to, r);
    }
  }

  Search search(net, k, fixed, options);
  if (options.warm_start) {
    try {
      const TreePartitionSolution guess = two_stage(net, groups);
      bool respects = true;
      for (int i = 0; i < net.num_buses(); ++i) {
        if (fixed[i] >= 0 && guess.partition.assignment[i] != fixed[i]) respects = false;
      }
      if (respects) search.seed_incumbent(guess.partition.assignment, guess.disruption_mw);
    } catch (const Error&) {
      // No warm start; the search finds its own first incumbent.
    }
  }
  if (!search.place_fixed()) {
    throw InfeasibleError("fixed buses cannot form connected clusters");
  }
  search.run();

  BnBStats stats;
  stats.nodes = search.nodes();
  stats.proven_optimal = !search.stopped();
  if (!search.has_incumbent()) {
    if (search.stopped()) {
      throw BudgetExceeded("search limit reached after " + std::to_string(stats.nodes) +
                           " nodes without a feasible tree partition");
    }
    throw InfeasibleError("no coherency-respecting tree partition exists");
  }
  stats.incumbent = search.incumbent_value();
  stats.best_bound = stats.proven_optimal ? stats.incumbent
                                          : std::min(search.root_bound(), stats.incumbent);

  Partition p = make_partition(search.incumbent(), k);
  SpanningTreeSplit split = max_weight_spanning_tree(reduced_graph(net, p));
  TreePartitionSolution sol = make_solution(net, std::move(p), std::move(split.switched),
                                            ssr != nullptr ? Method::kSsr : Method::kMilp);
  validate_solution(net, groups, sol);
  stats.wall_s = std::chrono::duration<double>(Clock::now() - start).count();
  sol.runtime_s = stats.wall_s;
  return {std::move(sol), stats};
}

}  // namespace treepart
