// Copyright 2026 The ckptplan Authors
// SPDX-License-Identifier: Apache-2.0
//
// Optimal checkpoint selection for linear chains.
//
// All solvers take a profile d_0..d_n, force 0 and n into the plan, and return
// the plan together with its objective value. Ties are broken toward the
// smallest next-checkpoint index, which keeps every returned plan invariant
// under uniform scaling of the sizes.

#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "ckptplan/cost.hpp"
#include "ckptplan/profile.hpp"

namespace ckptplan {

enum class SolverKind {
  kStaticDp,
  kDynamicQuadratic,
  kDynamicLinear,
  kSqrtBaseline,
  kBruteStatic,
  kBruteDynamic,
};

// CLI tags: static-dp, dynamic-n2, dynamic-linear, sqrt, brute-static, brute-dynamic.
std::string_view SolverTag(SolverKind kind);
std::optional<SolverKind> ParseSolverKind(std::string_view tag);
// The objective a solver optimizes; the sqrt baseline reports under dynamic.
CostModel NativeModel(SolverKind kind);
const std::vector<SolverKind>& AllSolvers();

// Exhaustive solvers refuse profiles with more layers than this.
inline constexpr std::size_t kBruteForceMaxLayers = 25;

// Checkpoints at ceil(k * n / ceil(sqrt(n))) for k = 1 .. ceil(sqrt(n)) - 1,
// i.e. ceil(sqrt(n)) segments of equal layer count (+-1).
SolveResult SolveSqrtBaseline(const LayerProfile& profile,
                              CostModel model = CostModel::kDynamic);

struct StaticDpOptions {
  // Recomputes every window minimum naively and throws std::logic_error if the
  // queue head disagrees. O(n^4); for tests.
  bool verify_queue = false;
};

// Minimizes StaticCost over all plans in O(n^3): for each of the O(n^2)
// candidate segment budgets s, a sliding-window DP finds the least checkpoint
// memory whose segments all fit in s; the answer is min_s (s + memory).
SolveResult SolveStaticDp(const LayerProfile& profile, const StaticDpOptions& options = {});

// Minimizes DynamicPeak in O(n^2) with
//   M(n) = d_n,  M(i) = min_{i<j<=n} max(d_i + M(j), d_i + s(i, j) + d_j),
// answer M(0).
SolveResult SolveDynamicQuadratic(const LayerProfile& profile);

struct LinearStep {
  Index i = 0;          // M(i) computed in this step
  Index start = 0;      // where the crossover search resumed
  Index crossover = 0;  // last queued index before M and U cross (or the queue head)
  Index chosen = 0;     // j*(i): crossover or its queue successor
};

struct DynamicLinearStats {
  // One entry per i = n-1 .. 0, in computation order.
  std::vector<LinearStep> steps;
  // Queue positions walked by all crossover searches.
  std::size_t search_moves = 0;
  // Push/pop operations on the window-maximum deque.
  std::size_t window_ops = 0;
};

struct DynamicLinearOptions {
  // Checks the decreasing-queue ordering at every step (O(n^2)); throws
  // std::logic_error on violation.
  bool verify_queue = false;
  DynamicLinearStats* stats = nullptr;
};

// Same recursion as SolveDynamicQuadratic, evaluated in amortized O(n) with a
// queue of M values decreasing in index and a crossover search that resumes
// from the previous argmin.
SolveResult SolveDynamicLinear(const LayerProfile& profile,
                               const DynamicLinearOptions& options = {});

// Enumerate every interior subset. Ties: fewer checkpoints, then
// lexicographically smallest. Throws GuardError when n > kBruteForceMaxLayers.
SolveResult BruteForceStatic(const LayerProfile& profile);
SolveResult BruteForceDynamic(const LayerProfile& profile);

// Dispatch by kind. model only affects the sqrt baseline.
// Runs a solver. With a model override the returned plan is re-scored under
// that model (the plan itself is what the solver picks for its native model).
SolveResult Solve(SolverKind kind, const LayerProfile& profile,
                  std::optional<CostModel> model = std::nullopt);

}  // namespace ckptplan
