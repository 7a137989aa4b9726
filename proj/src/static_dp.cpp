// Copyright 2026 The ckptplan Authors
// SPDX-License-Identifier: Apache-2.0
//
// Static checkpoint selection.
//
// For a segment budget s, M(i, s) is the least checkpoint memory over d_0..d_i
// such that every segment seen so far sums to at most s (d_i itself may lie in
// an open segment). With j the last checkpoint at or before i,
//   M(i, s) = min_{l(i) <= j <= i} d_j + M(j - 1, s),   M(-1, s) = 0,
// where l(i) is the smallest j with d_{j+1} + ... + d_i <= s. Because l(i) is
// non-decreasing the minimum is a sliding-window minimum. d_n is forced, so the
// checkpoint memory for budget s is d_n + M(n - 1, s).

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ckptplan/monotonic_queue.hpp"
#include "ckptplan/solvers.hpp"

namespace ckptplan {
namespace {

class BudgetDp {
 public:
  explicit BudgetDp(std::span<const Bytes> d) : d_(d), best_(d.size()), last_(d.size()) {}

  // Checkpoint memory of the cheapest plan whose segments all fit in budget.
  Bytes Run(Bytes budget, bool verify) {
    const std::size_t n = d_.size() - 1;
    queue_.clear();
    best_[0] = d_[0];
    last_[0] = 0;
    queue_.Push(0, d_[0]);

    std::size_t window_start = 0;
    Bytes window_sum = 0;  // d_{window_start+1} + ... + d_i
    for (std::size_t i = 1; i < n; ++i) {
      queue_.Push(i, d_[i] + best_[i - 1]);
      window_sum += d_[i];
      while (window_sum > budget) {
        ++window_start;
        window_sum -= d_[window_start];
      }
      queue_.EvictBefore(window_start);
      const auto& head = queue_.Head();
      best_[i] = head.key;
      last_[i] = head.index;
      if (verify) VerifyHead(i, window_start);
    }
    return d_[n] + best_[n - 1];
  }

  // Plan of the most recent Run.
  std::vector<Index> Plan() const {
    const std::size_t n = d_.size() - 1;
    std::vector<Index> indices{n};
    std::size_t cur = n - 1;
    while (true) {
      Index j = last_[cur];
      indices.push_back(j);
      if (j == 0) break;
      cur = j - 1;
    }
    std::reverse(indices.begin(), indices.end());
    return indices;
  }

 private:
  Bytes Key(std::size_t j) const { return d_[j] + (j == 0 ? 0 : best_[j - 1]); }

  void VerifyHead(std::size_t i, std::size_t window_start) const {
    Bytes min_key = std::numeric_limits<Bytes>::max();
    std::size_t argmin = 0;
    for (std::size_t j = window_start; j <= i; ++j) {
      if (Key(j) < min_key) {
        min_key = Key(j);
        argmin = j;
      }
    }
    if (queue_.Head().key != min_key || queue_.Head().index != argmin) {
      throw std::logic_error("static DP queue head is not the window argmin at i = " +
                             std::to_string(i));
    }
    const MonotonicQueue<Bytes>::Entry* prev = nullptr;
    for (const auto& e : queue_) {
      if (e.index < window_start || e.index > i || (prev && (prev->index >= e.index ||
                                                             prev->key > e.key))) {
        throw std::logic_error("static DP queue out of order at i = " + std::to_string(i));
      }
      prev = &e;
    }
  }

  std::span<const Bytes> d_;
  std::vector<Bytes> best_;
  std::vector<Index> last_;
  MonotonicQueue<Bytes> queue_;
};

// Every contiguous interior sum d_a + ... + d_b (1 <= a <= b <= n-1) plus 0,
// sorted and deduplicated. The optimal plan's largest segment is one of these.
std::vector<Bytes> CandidateBudgets(std::span<const Bytes> d) {
  const std::size_t n = d.size() - 1;
  std::vector<Bytes> budgets{0};
  for (std::size_t a = 1; a < n; ++a) {
    Bytes sum = 0;
    for (std::size_t b = a; b < n; ++b) {
      sum += d[b];
      budgets.push_back(sum);
    }
  }
  std::sort(budgets.begin(), budgets.end());
  budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());
  return budgets;
}

}  // namespace

SolveResult SolveStaticDp(const LayerProfile& profile, const StaticDpOptions& options) {
  const auto d = profile.sizes();
  BudgetDp dp(d);

  Bytes best_total = std::numeric_limits<Bytes>::max();
  Bytes best_budget = 0;
  for (Bytes budget : CandidateBudgets(d)) {
    const Bytes total = budget + dp.Run(budget, options.verify_queue);
    if (total < best_total) {
      best_total = total;
      best_budget = budget;
    }
  }

  dp.Run(best_budget, false);
  SolveResult result;
  result.plan = CheckpointPlan(dp.Plan(), profile.num_layers());
  result.model = CostModel::kStatic;
  result.predicted_peak = StaticCost(profile, result.plan);
  result.solver = std::string(SolverTag(SolverKind::kStaticDp));
  return result;
}

}  // namespace ckptplan
