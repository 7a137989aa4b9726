// Copyright 2026 The ckptplan Authors
// SPDX-License-Identifier: Apache-2.0

#include "ckptplan/cost.hpp"

#include <algorithm>
#include <string>

#include "ckptplan/error.hpp"

namespace ckptplan {
namespace {

void CheckFits(const LayerProfile& profile, const CheckpointPlan& plan) {
  if (plan.size() < 2 || plan.num_layers() != profile.num_layers()) {
    throw DataError("plan covers " + std::to_string(plan.num_layers()) +
                    " layers but the profile has " + std::to_string(profile.num_layers()));
  }
}

}  // namespace

CheckpointPlan::CheckpointPlan(std::vector<Index> indices, std::size_t num_layers)
    : indices_(std::move(indices)) {
  if (num_layers == 0) throw DataError("invalid plan: profile has no layers");
  if (indices_.size() < 2 || indices_.front() != 0 || indices_.back() != num_layers) {
    throw DataError("invalid plan: must start at 0 and end at " + std::to_string(num_layers));
  }
  for (std::size_t k = 1; k < indices_.size(); ++k) {
    if (indices_[k] <= indices_[k - 1]) {
      throw DataError("invalid plan: indices must be strictly increasing");
    }
  }
}

CheckpointPlan CheckpointPlan::Endpoints(std::size_t num_layers) {
  return CheckpointPlan({0, num_layers}, num_layers);
}

bool CheckpointPlan::contains(Index k) const {
  return std::binary_search(indices_.begin(), indices_.end(), k);
}

std::vector<std::pair<Index, Index>> CheckpointPlan::Segments() const {
  std::vector<std::pair<Index, Index>> out;
  for (std::size_t k = 1; k < indices_.size(); ++k) {
    out.emplace_back(indices_[k - 1], indices_[k]);
  }
  return out;
}

std::vector<Index> CheckpointPlan::LayerCheckpoints() const {
  if (indices_.empty()) return {};
  return {indices_.begin() + 1, indices_.end()};
}

std::string_view CostModelName(CostModel model) {
  return model == CostModel::kStatic ? "static" : "dynamic";
}

std::optional<CostModel> ParseCostModel(std::string_view name) {
  if (name == "static") return CostModel::kStatic;
  if (name == "dynamic") return CostModel::kDynamic;
  return std::nullopt;
}

Bytes StaticCost(const LayerProfile& profile, const CheckpointPlan& plan) {
  CheckFits(profile, plan);
  const auto d = profile.sizes();
  Bytes checkpoints = 0;
  for (Index c : plan.indices()) checkpoints += d[c];
  Bytes worst_segment = 0;
  for (auto [h, i] : plan.Segments()) {
    Bytes segment = 0;
    for (Index k = h + 1; k < i; ++k) segment += d[k];
    worst_segment = std::max(worst_segment, segment);
  }
  return checkpoints + worst_segment;
}

Bytes SegmentTerm(const LayerProfile& profile, Index h, Index i) {
  if (h >= i || i > profile.num_layers()) {
    throw DataError("segment term needs h < i <= n, got (" + std::to_string(h) + ", " +
                    std::to_string(i) + ")");
  }
  const auto d = profile.sizes();
  Bytes sum = 0;
  Bytes peak = d[h];
  for (Index k = h + 1; k < i; ++k) {
    sum += d[k];
    peak = std::max(peak, d[k]);
  }
  return sum + peak;
}

Bytes DynamicPeak(const LayerProfile& profile, const CheckpointPlan& plan) {
  CheckFits(profile, plan);
  const auto d = profile.sizes();
  Bytes resident = d[0];
  Bytes peak = 0;
  for (auto [h, i] : plan.Segments()) {
    resident += d[i];
    peak = std::max(peak, resident + SegmentTerm(profile, h, i));
  }
  return peak;
}

Bytes UValue(const LayerProfile& profile, Index i, Index j) {
  if (i >= j || j > profile.num_layers()) {
    throw DataError("U(i, j) needs i < j <= n, got (" + std::to_string(i) + ", " +
                    std::to_string(j) + ")");
  }
  return SegmentTerm(profile, i, j) + profile[j];
}

Bytes Evaluate(const LayerProfile& profile, const CheckpointPlan& plan, CostModel model) {
  return model == CostModel::kStatic ? StaticCost(profile, plan) : DynamicPeak(profile, plan);
}

}  // namespace ckptplan
