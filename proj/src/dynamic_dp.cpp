// Copyright 2026 The ckptplan Authors
// SPDX-License-Identifier: Apache-2.0
//
// Dynamic (early-free) checkpoint selection.
//
// M(i) is the least peak from checkpoint i through n given i is a checkpoint:
//   M(n) = d_n,
//   M(i) = d_i + min_{i<j<=n} max(M(j), U(i, j)),  U(i, j) = s(i, j) + d_j.

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ckptplan/solvers.hpp"

namespace ckptplan {
namespace {

std::vector<Index> FollowChoices(const std::vector<Index>& next, std::size_t n) {
  std::vector<Index> plan{0};
  while (plan.back() != n) plan.push_back(next[plan.back()]);
  return plan;
}

SolveResult Finish(const LayerProfile& profile, std::vector<Index> indices, Bytes peak,
                   SolverKind kind) {
  SolveResult result;
  result.plan = CheckpointPlan(std::move(indices), profile.num_layers());
  result.predicted_peak = peak;
  result.model = CostModel::kDynamic;
  result.solver = std::string(SolverTag(kind));
  return result;
}

// Maximum of d over a window [left, right) whose left end only moves left and
// whose right end moves in whole queue gaps. Entries are the window's strict
// prefix maxima, so values increase from front to back and the back holds the
// window maximum.
class WindowMax {
 public:
  explicit WindowMax(std::size_t* ops) : ops_(ops) {}

  void AddLeft(Index k, Bytes value) {
    while (!entries_.empty() && entries_.front().second <= value) Pop(true);
    entries_.emplace_front(k, value);
    ++*ops_;
  }

  // Window becomes [left, right).
  void ShrinkRight(Index right) {
    while (!entries_.empty() && entries_.back().first >= right) Pop(false);
  }

  // Appends a block whose maximum is value, attained at k.
  void ExtendRight(Index k, Bytes value) {
    if (entries_.empty() || value > entries_.back().second) {
      entries_.emplace_back(k, value);
      ++*ops_;
    }
  }

  Bytes Max() const { return entries_.back().second; }
  void Clear() {
    *ops_ += entries_.size();
    entries_.clear();
  }

 private:
  void Pop(bool front) {
    front ? entries_.pop_front() : entries_.pop_back();
    ++*ops_;
  }

  std::deque<std::pair<Index, Bytes>> entries_;
  std::size_t* ops_;
};

}  // namespace

SolveResult SolveDynamicQuadratic(const LayerProfile& profile) {
  const auto d = profile.sizes();
  const std::size_t n = profile.num_layers();
  std::vector<Bytes> best(n + 1);
  std::vector<Index> next(n + 1, n);
  best[n] = d[n];
  for (std::size_t i = n; i-- > 0;) {
    Bytes interior = 0;
    Bytes peak = d[i];
    Bytes m = std::numeric_limits<Bytes>::max();
    for (std::size_t j = i + 1; j <= n; ++j) {
      const Bytes value = d[i] + std::max(best[j], interior + peak + d[j]);
      if (value < m) {
        m = value;
        next[i] = j;
      }
      interior += d[j];
      peak = std::max(peak, d[j]);
    }
    best[i] = m;
  }
  return Finish(profile, FollowChoices(next, n), best[0], SolverKind::kDynamicQuadratic);
}

// Linear-time evaluation.
//
// The queue holds indices j > i whose M values strictly decrease as the index
// grows; any index evicted from it is dominated by a smaller index with no
// larger M and a smaller U. Along the queue U(i, .) increases and M decreases,
// so the minimum of max(M, U) sits at the crossover: the last queued j with
// U(i, j) < M(j), or the queued index right after it. The crossover only moves
// toward smaller indices as i decreases, so each search resumes at the previous
// choice.
//
// The queue is a vector with the head (smallest index) at the back, which keeps
// the positions of surviving entries stable. Each queued j also caches the
// maximum of d over its gap [j, successor), so U(i, successor) is available in
// O(1) and the window [i, j) can jump right by one gap.
SolveResult SolveDynamicLinear(const LayerProfile& profile, const DynamicLinearOptions& options) {
  const auto d = profile.sizes();
  const std::size_t n = profile.num_layers();

  std::vector<Bytes> prefix(n + 2, 0);  // prefix[k] = d_0 + ... + d_{k-1}
  for (std::size_t k = 0; k <= n; ++k) prefix[k + 1] = prefix[k] + d[k];
  auto interior = [&](Index i, Index j) { return prefix[j] - prefix[i + 1]; };

  std::vector<Bytes> best(n + 1);
  std::vector<Index> next(n + 1, n);
  std::vector<Bytes> gap_max(n + 1);
  std::vector<Index> gap_arg(n + 1);

  std::size_t window_ops = 0;
  WindowMax window(&window_ops);
  std::size_t search_moves = 0;

  best[n] = d[n];
  gap_max[n] = d[n];
  gap_arg[n] = n;
  std::vector<Index> queue{n};
  std::size_t pos = 0;  // queue position of the current search index

  for (std::size_t i = n; i-- > 0;) {
    window.AddLeft(i, d[i]);  // window = [i, queue[pos])
    const Index start = queue[pos];

    Bytes u = interior(i, queue[pos]) + window.Max() + d[queue[pos]];
    while (u >= best[queue[pos]] && pos + 1 < queue.size()) {
      ++pos;
      window.ShrinkRight(queue[pos]);
      u = interior(i, queue[pos]) + window.Max() + d[queue[pos]];
      ++search_moves;
    }
    const Index crossover = queue[pos];

    Index chosen = crossover;
    Bytes value = std::max(best[crossover], u);
    if (pos > 0) {
      const Index succ = queue[pos - 1];
      const Bytes u_succ =
          interior(i, succ) + std::max(window.Max(), gap_max[crossover]) + d[succ];
      const Bytes succ_value = std::max(best[succ], u_succ);
      if (succ_value < value) {
        value = succ_value;
        chosen = succ;
        window.ExtendRight(gap_arg[crossover], gap_max[crossover]);
        --pos;
      }
    }
    best[i] = d[i] + value;
    next[i] = chosen;
    if (options.stats) options.stats->steps.push_back({i, start, crossover, chosen});

    // Insert M(i) at the head, merging the gaps of evicted entries into i's gap.
    Bytes merged_max = d[i];
    Index merged_arg = i;
    while (best[queue.back()] >= best[i]) {
      const Index evicted = queue.back();
      if (gap_max[evicted] > merged_max) {
        merged_max = gap_max[evicted];
        merged_arg = gap_arg[evicted];
      }
      queue.pop_back();
    }
    gap_max[i] = merged_max;
    gap_arg[i] = merged_arg;
    if (pos >= queue.size()) {
      // The search index was evicted; resume from the new head i with [i, i).
      window.Clear();
      pos = queue.size();
    }
    queue.push_back(i);

    if (options.verify_queue) {
      for (std::size_t t = 1; t < queue.size(); ++t) {
        if (queue[t] >= queue[t - 1] || best[queue[t]] <= best[queue[t - 1]]) {
          throw std::logic_error("dynamic queue not decreasing at i = " + std::to_string(i));
        }
      }
    }
  }

  if (options.stats) {
    options.stats->search_moves = search_moves;
    options.stats->window_ops = window_ops;
  }
  return Finish(profile, FollowChoices(next, n), best[0], SolverKind::kDynamicLinear);
}

}  // namespace ckptplan
