// Copyright 2026 The LatentProbe Authors
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

#include "latentprobe/multicut.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <limits>
#include <optional>
#include <mutex>
#include <numeric>
#include <queue>
#include <string>
#include <thread>
#include <tuple>

#include "latentprobe/metrics.hpp"
#include "latentprobe/random.hpp"

namespace latentprobe {
namespace {

constexpr std::size_t kForcedStartLimit = 64;
constexpr double kMinGain = 1e-9;

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller root survives so labels stay deterministic.
  void Unite(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

Clustering FromRoots(DisjointSets& sets, std::size_t n) {
  std::vector<std::uint64_t> roots(n);
  for (std::size_t i = 0; i < n; ++i) roots[i] = sets.Find(i);
  return Clustering::Canonical(roots);
}

void CheckCovers(const CostGraph& graph, std::size_t size) {
  Require(static_cast<Index>(size) == graph.node_count(), ErrorCode::kSizeMismatch,
          "clustering size does not match graph node count");
}

// Mutable state for RefineKl. Column c of `affinity_` holds, for every node,
// the summed cost to the members of cluster c.
class KlState {
 public:
  static constexpr std::size_t kNewCluster = std::numeric_limits<std::size_t>::max();

  KlState(const CostGraph& graph, const Clustering& start) : graph_(graph), n_(graph.node_count()) {
    label_.assign(start.assignment().begin(), start.assignment().end());
    const std::size_t k = start.cluster_count();
    affinity_.assign(k, Eigen::VectorXd::Zero(n_));
    size_.assign(k, 0);
    for (Index x = 0; x < n_; ++x) {
      ++size_[label_[x]];
      for (Index y = 0; y < n_; ++y) affinity_[label_[x]](y) += graph_.cost(x, y);
    }
    for (std::size_t c = 0; c < k; ++c) active_.push_back(c);
    best_delta_.assign(n_, 0.0);
    best_target_.assign(n_, kNewCluster);
    locked_.assign(n_, false);
  }

  const std::vector<std::size_t>& labels() const { return label_; }

  void RefreshAll() {
    for (Index x = 0; x < n_; ++x) Refresh(x);
  }

  // Lowest-delta unlocked node, ties to the lowest index; -1 when none.
  Index PickMove() const {
    Index best = -1;
    for (Index x = 0; x < n_; ++x) {
      if (locked_[x] || !std::isfinite(best_delta_[x])) continue;
      if (best < 0 || best_delta_[x] < best_delta_[best]) best = x;
    }
    return best;
  }

  double delta(Index x) const { return best_delta_[x]; }
  std::size_t target(Index x) const { return best_target_[x]; }
  void Lock(Index x) { locked_[x] = true; }
  void UnlockAll() { std::fill(locked_.begin(), locked_.end(), false); }

  // Moves x and returns the cluster it left.
  std::size_t Move(Index x, std::size_t to) {
    const std::size_t from = label_[x];
    if (to == kNewCluster) to = Allocate();
    else if (size_[to] == 0) Activate(to);
    for (Index y = 0; y < n_; ++y) {
      const double w = graph_.cost(x, y);
      affinity_[from](y) -= w;
      affinity_[to](y) += w;
    }
    label_[x] = to;
    ++size_[to];
    if (--size_[from] == 0) Deactivate(from);
    for (Index y = 0; y < n_; ++y) {
      if (locked_[y]) continue;
      const std::size_t own = label_[y];
      if (own == from || own == to || best_target_[y] == from || best_target_[y] == to) {
        Refresh(y);
        continue;
      }
      // Only the two touched clusters changed value for y.
      for (std::size_t c : {from, to}) {
        if (size_[c] == 0) continue;
        const double delta = affinity_[own](y) - affinity_[c](y);
        if (delta < best_delta_[y]) {
          best_delta_[y] = delta;
          best_target_[y] = c;
        }
      }
    }
    return from;
  }

 private:
  void Refresh(Index x) {
    const std::size_t own = label_[x];
    double best_value = -std::numeric_limits<double>::infinity();
    std::size_t best = kNewCluster;
    if (size_[own] > 1) best_value = 0.0;  // fresh singleton
    for (std::size_t c : active_) {
      if (c == own) continue;
      const double value = affinity_[c](x);
      if (value > best_value) {
        best_value = value;
        best = c;
      }
    }
    best_target_[x] = best;
    best_delta_[x] = std::isfinite(best_value) ? affinity_[own](x) - best_value
                                               : std::numeric_limits<double>::infinity();
  }

  std::size_t Allocate() {
    if (!free_.empty()) {
      const std::size_t c = free_.back();
      Activate(c);
      return c;
    }
    affinity_.push_back(Eigen::VectorXd::Zero(n_));
    size_.push_back(0);
    active_.push_back(affinity_.size() - 1);
    return affinity_.size() - 1;
  }

  void Activate(std::size_t c) {
    free_.erase(std::find(free_.begin(), free_.end(), c));
    active_.insert(std::lower_bound(active_.begin(), active_.end(), c), c);
  }

  void Deactivate(std::size_t c) {
    affinity_[c].setZero();
    active_.erase(std::find(active_.begin(), active_.end(), c));
    free_.push_back(c);
  }

  const CostGraph& graph_;
  Index n_;
  std::vector<std::size_t> label_;
  std::vector<Eigen::VectorXd> affinity_;
  std::vector<std::size_t> size_;
  std::vector<std::size_t> active_;  // sorted
  std::vector<std::size_t> free_;
  std::vector<double> best_delta_;
  std::vector<std::size_t> best_target_;
  std::vector<bool> locked_;
};

// Merges the cluster pair with the largest positive cross weight until no
// pair would lower the objective.
Clustering JoinClusters(const CostGraph& graph, const Clustering& start) {
  const Index n = graph.node_count();
  std::vector<std::uint64_t> label(start.assignment().begin(), start.assignment().end());
  const std::size_t k = start.cluster_count();
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(static_cast<Index>(k), static_cast<Index>(k));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const auto a = static_cast<Index>(label[i]);
      const auto b = static_cast<Index>(label[j]);
      if (a != b) {
        cross(a, b) += graph.cost(i, j);
        cross(b, a) += graph.cost(i, j);
      }
    }
  }
  std::vector<bool> alive(k, true);
  for (;;) {
    double best = 1e-9;
    Index keep = -1;
    Index drop = -1;
    for (Index a = 0; a < static_cast<Index>(k); ++a) {
      if (!alive[a]) continue;
      for (Index b = a + 1; b < static_cast<Index>(k); ++b) {
        if (alive[b] && cross(a, b) > best) {
          best = cross(a, b);
          keep = a;
          drop = b;
        }
      }
    }
    if (keep < 0) break;
    cross.row(keep) += cross.row(drop);
    cross.col(keep) += cross.col(drop);
    cross(keep, keep) = 0.0;
    alive[drop] = false;
    for (auto& l : label) {
      if (l == static_cast<std::uint64_t>(drop)) l = static_cast<std::uint64_t>(keep);
    }
  }
  return Clustering::Canonical(label);
}

// Two-cluster KL: tentative moves of nodes across the (a, b) boundary with
// locking, keeping the best prefix. b may name an empty cluster. Returns true
// when the labels changed.
// Best-prefix gain of a locked move sequence across the (a, b) boundary;
// `first` forces the opening move when < m.
double PairSequence(const CostGraph& graph, const std::vector<Index>& nodes, std::vector<std::uint8_t> side,
                    std::size_t first, std::vector<std::size_t>& order, std::size_t& best_length) {
  const std::size_t m = nodes.size();
  std::vector<double> gain(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const double w = graph.cost(nodes[i], nodes[j]);
      gain[i] += side[i] == side[j] ? w : -w;
    }
  }
  std::vector<bool> locked(m, false);
  order.clear();
  double cumulative = 0.0;
  double best_cumulative = 0.0;
  best_length = 0;
  for (std::size_t step = 0; step < m; ++step) {
    std::size_t pick = step == 0 ? first : m;
    if (pick == m) {
      for (std::size_t i = 0; i < m; ++i) {
        if (!locked[i] && (pick == m || gain[i] < gain[pick])) pick = i;
      }
    }
    cumulative += gain[pick];
    for (std::size_t j = 0; j < m; ++j) {
      if (j == pick) continue;
      const double w = graph.cost(nodes[pick], nodes[j]);
      gain[j] += side[j] == side[pick] ? -2.0 * w : 2.0 * w;
    }
    side[pick] ^= 1;
    locked[pick] = true;
    order.push_back(pick);
    if (cumulative < best_cumulative) {
      best_cumulative = cumulative;
      best_length = order.size();
    }
  }
  return best_cumulative;
}

// Two-cluster KL: tentative moves of nodes across the (a, b) boundary with
// locking, keeping the best prefix. b may name an empty cluster. On small
// graphs every node is also tried as the opening move. Returns true when the
// labels changed.
bool RefinePair(const CostGraph& graph, std::vector<std::uint64_t>& label, std::uint64_t a, std::uint64_t b) {
  std::vector<Index> nodes;
  for (Index x = 0; x < graph.node_count(); ++x) {
    if (label[x] == a || label[x] == b) nodes.push_back(x);
  }
  const std::size_t m = nodes.size();
  std::vector<std::uint8_t> side(m);
  for (std::size_t i = 0; i < m; ++i) side[i] = label[nodes[i]] == b;
  std::vector<std::size_t> order;
  std::vector<std::size_t> best_order;
  std::size_t length = 0;
  std::size_t best_length = 0;
  double best = -1e-9;
  const std::size_t starts = static_cast<std::size_t>(graph.node_count()) <= kForcedStartLimit ? m : 0;
  for (std::size_t first = 0; first <= starts; ++first) {
    const double value = PairSequence(graph, nodes, side, first == starts ? m : first, order, length);
    if (value < best) {
      best = value;
      best_order = order;
      best_length = length;
    }
  }
  for (std::size_t s = 0; s < best_length; ++s) {
    const Index x = nodes[best_order[s]];
    label[x] = label[x] == a ? b : a;
  }
  return best_length > 0;
}

// One sweep of RefinePair over every cluster pair and every cluster against
// a fresh empty one.
Clustering RefinePairs(const CostGraph& graph, const Clustering& start) {
  std::vector<std::uint64_t> label(start.assignment().begin(), start.assignment().end());
  std::uint64_t next = start.cluster_count();
  for (std::uint64_t a = 0; a < next; ++a) {
    for (std::uint64_t b = a + 1; b <= next; ++b) {
      if (RefinePair(graph, label, a, b) && b == next) ++next;
    }
  }
  return Clustering::Canonical(label);
}

Clustering ToClustering(const std::vector<std::size_t>& labels) {
  std::vector<std::uint64_t> raw(labels.begin(), labels.end());
  return Clustering::Canonical(raw);
}

}  // namespace

CostGraph::CostGraph(Index n, double theta, double temperature)
    : CostGraph(n, std::vector<double>(static_cast<std::size_t>(n * (n - 1) / 2), 0.0), theta, temperature) {}

CostGraph::CostGraph(Index n, std::vector<double> costs, double theta, double temperature)
    : n_(n), costs_(std::move(costs)), theta_(theta), temperature_(temperature) {
  Require(n >= 1, ErrorCode::kEmptySet, "cost graph needs at least one node");
  Require(costs_.size() == static_cast<std::size_t>(n * (n - 1) / 2), ErrorCode::kSizeMismatch,
          "complete graph needs n(n-1)/2 edge costs");
  for (double w : costs_) Require(std::isfinite(w), ErrorCode::kNonFinite, "edge cost is not finite");
}

double DefaultTemperature(const FeatureSet& features, std::uint64_t seed, std::size_t max_pairs) {
  const Index n = features.size();
  const auto total_pairs = static_cast<std::size_t>(n * (n - 1) / 2);
  std::vector<double> sample;
  if (total_pairs <= max_pairs) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) sample.push_back(PairwiseDistance(features, i, j));
    }
  } else {
    Rng rng(seed);
    const auto un = static_cast<std::uint64_t>(n);
    while (sample.size() < max_pairs) {
      const auto i = static_cast<Index>(rng.Below(un));
      const auto j = static_cast<Index>(rng.Below(un));
      if (i != j) sample.push_back(PairwiseDistance(features, i, j));
    }
  }
  if (sample.size() < 2) return 1.0;
  const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / static_cast<double>(sample.size());
  double ss = 0.0;
  for (double d : sample) ss += (d - mean) * (d - mean);
  const double sd = std::sqrt(ss / static_cast<double>(sample.size()));
  return sd > 0.0 ? sd : 1.0;
}

EdgeLabeling InducedLabeling(const CostGraph& graph, const Clustering& clustering) {
  CheckCovers(graph, clustering.size());
  EdgeLabeling labeling(graph.edge_count());
  const Index n = graph.node_count();
  std::size_t e = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) labeling[e++] = clustering[i] != clustering[j] ? 1 : 0;
  }
  return labeling;
}

double MulticutObjective(const CostGraph& graph, const Clustering& clustering) {
  CheckCovers(graph, clustering.size());
  const Index n = graph.node_count();
  const auto costs = graph.costs();
  double total = 0.0;
  std::size_t e = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j, ++e) {
      if (clustering[i] != clustering[j]) total += costs[e];
    }
  }
  return total;
}

double MulticutObjective(const CostGraph& graph, const EdgeLabeling& labeling) {
  Require(labeling.size() == graph.edge_count(), ErrorCode::kSizeMismatch, "edge labeling size mismatch");
  double total = 0.0;
  for (std::size_t e = 0; e < labeling.size(); ++e) {
    if (labeling[e]) total += graph.costs()[e];
  }
  return total;
}

bool IsValidDecomposition(const CostGraph& graph, const EdgeLabeling& labeling) {
  Require(labeling.size() == graph.edge_count(), ErrorCode::kSizeMismatch, "edge labeling size mismatch");
  const Index n = graph.node_count();
  DisjointSets sets(static_cast<std::size_t>(n));
  std::size_t e = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j, ++e) {
      if (!labeling[e]) sets.Unite(i, j);
    }
  }
  e = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j, ++e) {
      if (labeling[e] && sets.Find(i) == sets.Find(j)) return false;
    }
  }
  return true;
}

Clustering SolveGaec(const CostGraph& graph) {
  const Index n = graph.node_count();
  Eigen::MatrixXd weight(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) weight(i, j) = graph.cost(i, j);
  }
  // (weight, a, b) with a < b; largest weight first, then smallest ids.
  using Entry = std::tuple<double, Index, Index>;
  auto order = [](const Entry& x, const Entry& y) {
    if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) < std::get<0>(y);
    if (std::get<1>(x) != std::get<1>(y)) return std::get<1>(x) > std::get<1>(y);
    return std::get<2>(x) > std::get<2>(y);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(order)> queue(order);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (weight(i, j) > 0.0) queue.emplace(weight(i, j), i, j);
    }
  }
  std::vector<bool> alive(static_cast<std::size_t>(n), true);
  DisjointSets sets(static_cast<std::size_t>(n));
  while (!queue.empty()) {
    const auto [w, a, b] = queue.top();
    queue.pop();
    if (!alive[a] || !alive[b] || weight(a, b) != w) continue;
    // Contract b into a; inter-cluster costs add up.
    weight.row(a) += weight.row(b);
    weight.col(a) = weight.row(a).transpose();
    weight(a, a) = 0.0;
    weight.row(b).setZero();
    weight.col(b).setZero();
    alive[b] = false;
    sets.Unite(a, b);
    for (Index c = 0; c < n; ++c) {
      if (c == a || !alive[c] || weight(a, c) <= 0.0) continue;
      queue.emplace(weight(a, c), std::min(a, c), std::max(a, c));
    }
  }
  return FromRoots(sets, static_cast<std::size_t>(n));
}

namespace {

// One global KL pass: a locked sequence of best single-node moves, rolled
// back to its best prefix. `first` < n forces the opening node.
Clustering GlobalPass(const CostGraph& graph, const Clustering& current, Index first, double& gain) {
  const Index n = graph.node_count();
  KlState state(graph, current);
  state.RefreshAll();
  struct Step {
    Index node;
    std::size_t from;
  };
  std::vector<Step> steps;
  double cumulative = 0.0;
  gain = 0.0;
  std::size_t best_length = 0;
  for (Index step = 0; step < n; ++step) {
    const Index x = step == 0 && first < n ? first : state.PickMove();
    if (x < 0 || !std::isfinite(state.delta(x))) break;
    cumulative += state.delta(x);
    const std::size_t from = state.Move(x, state.target(x));
    state.Lock(x);
    steps.push_back({x, from});
    if (cumulative < gain - kMinGain) {
      gain = cumulative;
      best_length = steps.size();
    }
  }
  while (steps.size() > best_length) {
    state.Move(steps.back().node, steps.back().from);
    steps.pop_back();
  }
  return ToClustering(state.labels());
}

}  // namespace

Clustering RefineKl(const CostGraph& graph, const Clustering& start, int max_passes) {
  CheckCovers(graph, start.size());
  const Index n = graph.node_count();
  Clustering current = start;
  double current_objective = MulticutObjective(graph, current);

  for (int pass = 0; pass < max_passes; ++pass) {
    double best_gain = 0.0;
    Clustering moved = GlobalPass(graph, current, n, best_gain);
    if (static_cast<std::size_t>(n) <= kForcedStartLimit) {
      for (Index first = 0; first < n; ++first) {
        double gain = 0.0;
        Clustering trial = GlobalPass(graph, current, first, gain);
        if (gain < best_gain) {
          best_gain = gain;
          moved = std::move(trial);
        }
      }
    }
    Clustering candidate = JoinClusters(graph, RefinePairs(graph, moved));
    const double candidate_objective = MulticutObjective(graph, candidate);
    // Guards against accumulated rounding in the incremental deltas.
    if (!(candidate_objective < current_objective)) break;
    current = std::move(candidate);
    current_objective = candidate_objective;
  }
  return current;
}

SweepResult ThresholdSweep(const FeatureSet& features, std::span<const double> grid, double temperature,
                           int kl_passes) {
  Require(!grid.empty(), ErrorCode::kInvalidArgument, "threshold grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    Require(grid[i] > grid[i - 1], ErrorCode::kInvalidArgument, "threshold grid must be strictly increasing");
  }
  SweepResult result;
  double best_accuracy = -1.0;
  std::optional<Clustering> previous;
  for (double theta : grid) {
    const CostGraph graph = BuildCostGraph(features, theta, temperature);
    Clustering clustering = SolveMulticut(graph, kl_passes);
    // Warm start from the previous threshold; the lower objective wins.
    if (previous) {
      Clustering warm = RefineKl(graph, *previous, kl_passes);
      if (MulticutObjective(graph, warm) < MulticutObjective(graph, clustering)) clustering = std::move(warm);
    }
    previous = clustering;
    SweepRow row;
    row.theta = theta;
    row.accuracy = ClusterAccuracy(clustering, features.labels());
    row.purity = Purity(clustering, features.labels());
    row.cluster_count = clustering.cluster_count();
    const auto sizes = clustering.ClusterSizes();
    row.singleton_count = static_cast<std::size_t>(std::count(sizes.begin(), sizes.end(), std::size_t{1}));
    if (row.accuracy > best_accuracy) {
      best_accuracy = row.accuracy;
      result.best_theta = theta;
    }
    result.rows.push_back(row);
  }
  return result;
}

std::vector<double> ParseGrid(const std::string& spec) {
  std::vector<double> parts;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t colon = std::min(spec.find(':', start), spec.size());
    double value = 0.0;
    const char* first = spec.data() + start;
    const char* last = spec.data() + colon;
    auto [ptr, ec] = std::from_chars(first, last, value);
    Require(ec == std::errc() && ptr == last, ErrorCode::kInvalidArgument, "bad sweep grid '" + spec + "'");
    parts.push_back(value);
    start = colon + 1;
  }
  Require(parts.size() == 3, ErrorCode::kInvalidArgument, "sweep grid must look like a:b:step");
  const double from = parts[0], to = parts[1], step = parts[2];
  Require(step > 0.0 && to >= from, ErrorCode::kInvalidArgument, "sweep grid needs step > 0 and b >= a");
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) grid.push_back(from + static_cast<double>(i) * step);
  return grid;
}

Clustering ClusterParallel(const FeatureSet& features, const ParallelOptions& options) {
  Require(options.chunks >= 1 && options.chunks <= features.size(), ErrorCode::kInvalidArgument,
          "chunk count must lie in [1, n]");
  Require(options.jobs >= 1, ErrorCode::kInvalidArgument, "jobs must be at least 1");
  if (options.chunks == 1) {
    return SolveMulticut(BuildCostGraph(features, options.theta, options.temperature), options.kl_passes);
  }

  const std::vector<Chunk> chunks = SplitDisjoint(features, options.chunks, options.seed);
  std::vector<Clustering> partial(chunks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t c = next++; c < chunks.size(); c = next++) {
      try {
        partial[c] = SolveMulticut(BuildCostGraph(chunks[c].features, options.theta, options.temperature),
                                   options.kl_passes);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(options.jobs), chunks.size());
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  // One centroid per chunk-level cluster, in chunk order.
  std::vector<std::size_t> offset(chunks.size() + 1, 0);
  for (std::size_t c = 0; c < chunks.size(); ++c) offset[c + 1] = offset[c] + partial[c].cluster_count();
  Eigen::MatrixXd centroids = Eigen::MatrixXd::Zero(static_cast<Index>(offset.back()), features.dim());
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(centroids.rows());
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    for (std::size_t r = 0; r < chunks[c].original_index.size(); ++r) {
      const auto slot = static_cast<Index>(offset[c] + partial[c][r]);
      centroids.row(slot) += chunks[c].features.row(static_cast<Index>(r)).cast<double>();
      counts(slot) += 1.0;
    }
  }
  centroids.array().colwise() /= counts.array();
  const Clustering merged =
      SolveMulticut(BuildCostGraph(centroids, options.theta, options.temperature), options.kl_passes);

  std::vector<std::uint64_t> raw(static_cast<std::size_t>(features.size()));
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    for (std::size_t r = 0; r < chunks[c].original_index.size(); ++r) {
      raw[static_cast<std::size_t>(chunks[c].original_index[r])] = merged[offset[c] + partial[c][r]];
    }
  }
  return Clustering::Canonical(raw);
}

}  // namespace latentprobe
