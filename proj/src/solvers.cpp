// Copyright 2026 The ckptplan Authors
// SPDX-License-Identifier: Apache-2.0

#include "ckptplan/solvers.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <string>

#include "ckptplan/error.hpp"

namespace ckptplan {
namespace {

constexpr std::array<std::pair<SolverKind, std::string_view>, 6> kTags = {{
    {SolverKind::kStaticDp, "static-dp"},
    {SolverKind::kDynamicQuadratic, "dynamic-n2"},
    {SolverKind::kDynamicLinear, "dynamic-linear"},
    {SolverKind::kSqrtBaseline, "sqrt"},
    {SolverKind::kBruteStatic, "brute-static"},
    {SolverKind::kBruteDynamic, "brute-dynamic"},
}};

std::size_t CeilSqrt(std::size_t n) {
  std::size_t k = 0;
  while (k * k < n) ++k;
  return k;
}

// Objective of the plan given by an interior bitmask, computed straight from
// the sizes so the enumeration does not pay for plan validation.
Bytes MaskObjective(std::span<const Bytes> d, std::uint64_t mask, CostModel model,
                    std::vector<Index>& indices) {
  const std::size_t n = d.size() - 1;
  indices.clear();
  indices.push_back(0);
  for (std::size_t k = 1; k < n; ++k) {
    if (mask >> (k - 1) & 1) indices.push_back(k);
  }
  indices.push_back(n);

  Bytes resident = 0;
  Bytes worst = 0;
  if (model == CostModel::kStatic) {
    for (Index c : indices) resident += d[c];
    for (std::size_t t = 1; t < indices.size(); ++t) {
      Bytes seg = 0;
      for (Index k = indices[t - 1] + 1; k < indices[t]; ++k) seg += d[k];
      worst = std::max(worst, seg);
    }
    return resident + worst;
  }
  resident = d[0];
  for (std::size_t t = 1; t < indices.size(); ++t) {
    const Index h = indices[t - 1];
    const Index i = indices[t];
    resident += d[i];
    Bytes seg = 0;
    Bytes peak = d[h];
    for (Index k = h + 1; k < i; ++k) {
      seg += d[k];
      peak = std::max(peak, d[k]);
    }
    worst = std::max(worst, resident + seg + peak);
  }
  return worst;
}

SolveResult BruteForce(const LayerProfile& profile, CostModel model, SolverKind kind) {
  const std::size_t n = profile.num_layers();
  if (n > kBruteForceMaxLayers) {
    throw GuardError("instance too large: " + std::to_string(n) +
                     " layers exceeds the exhaustive limit of " +
                     std::to_string(kBruteForceMaxLayers));
  }
  const auto d = profile.sizes();
  const std::uint64_t subsets = std::uint64_t{1} << (n - 1);

  Bytes best = std::numeric_limits<Bytes>::max();
  std::vector<Index> best_plan;
  std::vector<Index> scratch;
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    const Bytes value = MaskObjective(d, mask, model, scratch);
    const bool better = value < best ||
                        (value == best && (scratch.size() < best_plan.size() ||
                                           (scratch.size() == best_plan.size() &&
                                            scratch < best_plan)));
    if (better) {
      best = value;
      best_plan = scratch;
    }
  }

  SolveResult result;
  result.plan = CheckpointPlan(std::move(best_plan), n);
  result.predicted_peak = best;
  result.model = model;
  result.solver = std::string(SolverTag(kind));
  return result;
}

}  // namespace

std::string_view SolverTag(SolverKind kind) {
  for (auto [k, tag] : kTags) {
    if (k == kind) return tag;
  }
  return "unknown";
}

std::optional<SolverKind> ParseSolverKind(std::string_view tag) {
  for (auto [k, t] : kTags) {
    if (t == tag) return k;
  }
  return std::nullopt;
}

CostModel NativeModel(SolverKind kind) {
  switch (kind) {
    case SolverKind::kStaticDp:
    case SolverKind::kBruteStatic:
      return CostModel::kStatic;
    default:
      return CostModel::kDynamic;
  }
}

const std::vector<SolverKind>& AllSolvers() {
  static const std::vector<SolverKind> all = [] {
    std::vector<SolverKind> out;
    for (auto [k, tag] : kTags) out.push_back(k);
    return out;
  }();
  return all;
}

SolveResult SolveSqrtBaseline(const LayerProfile& profile, CostModel model) {
  const std::size_t n = profile.num_layers();
  const std::size_t segments = CeilSqrt(n);
  std::vector<Index> indices{0};
  for (std::size_t k = 1; k < segments; ++k) {
    indices.push_back((k * n + segments - 1) / segments);
  }
  indices.push_back(n);

  SolveResult result;
  result.plan = CheckpointPlan(std::move(indices), n);
  result.model = model;
  result.predicted_peak = Evaluate(profile, result.plan, model);
  result.solver = std::string(SolverTag(SolverKind::kSqrtBaseline));
  return result;
}

SolveResult BruteForceStatic(const LayerProfile& profile) {
  return BruteForce(profile, CostModel::kStatic, SolverKind::kBruteStatic);
}

SolveResult BruteForceDynamic(const LayerProfile& profile) {
  return BruteForce(profile, CostModel::kDynamic, SolverKind::kBruteDynamic);
}

namespace {

SolveResult RunNative(SolverKind kind, const LayerProfile& profile,
                      std::optional<CostModel> model) {
  switch (kind) {
    case SolverKind::kStaticDp:
      return SolveStaticDp(profile);
    case SolverKind::kDynamicQuadratic:
      return SolveDynamicQuadratic(profile);
    case SolverKind::kDynamicLinear:
      return SolveDynamicLinear(profile);
    case SolverKind::kSqrtBaseline:
      return SolveSqrtBaseline(profile, model.value_or(CostModel::kDynamic));
    case SolverKind::kBruteStatic:
      return BruteForceStatic(profile);
    case SolverKind::kBruteDynamic:
      return BruteForceDynamic(profile);
  }
  throw DataError("unknown solver");
}

}  // namespace

SolveResult Solve(SolverKind kind, const LayerProfile& profile,
                  std::optional<CostModel> model) {
  SolveResult result = RunNative(kind, profile, model);
  if (model && result.model != *model) {
    result.model = *model;
    result.predicted_peak = Evaluate(profile, result.plan, *model);
  }
  return result;
}

}  // namespace ckptplan
