// Copyright 2026 The ckptplan Authors
// SPDX-License-Identifier: Apache-2.0
//
// Checkpoint plans and the two peak-memory objectives.
//
// Static model: every checkpoint stays resident for the whole backward pass and
// a segment is freed in batch, so the peak is
//   sum(checkpoints) + max over segments of sum(segment interior).
//
// Dynamic model: activations are freed as soon as they are consumed, and a
// segment (h, i) holds one output-gradient buffer of max(d_h .. d_{i-1}). The
// memory at the backward stage of checkpoint i is
//   m(i) = sum(checkpoints <= i) + s(h, i),
//   s(h, i) = sum(d_{h+1} .. d_{i-1}) + max(d_h .. d_{i-1}),
// and the peak is the maximum m(i) over checkpoints i > 0.
//
// Neither objective includes the profile's base overhead.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ckptplan/profile.hpp"

namespace ckptplan {

using Index = std::size_t;

// Sorted checkpoint indices, always containing 0 and n.
class CheckpointPlan {
 public:
  CheckpointPlan() = default;
  // Validates against a profile with num_layers = n. Throws DataError on
  // unsorted/duplicate/out-of-range indices or missing endpoints.
  CheckpointPlan(std::vector<Index> indices, std::size_t num_layers);

  // The plan {0, n}.
  static CheckpointPlan Endpoints(std::size_t num_layers);

  const std::vector<Index>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  std::size_t num_layers() const { return indices_.empty() ? 0 : indices_.back(); }
  bool contains(Index k) const;

  // Consecutive checkpoint pairs (h, i); (h, h + 1) is an empty segment.
  std::vector<std::pair<Index, Index>> Segments() const;

  // Indices without the input, i.e. the 1-based layer numbering used when
  // listing checkpointed layers.
  std::vector<Index> LayerCheckpoints() const;

  bool operator==(const CheckpointPlan&) const = default;

 private:
  std::vector<Index> indices_;
};

enum class CostModel { kStatic, kDynamic };

std::string_view CostModelName(CostModel model);
std::optional<CostModel> ParseCostModel(std::string_view name);

struct SolveResult {
  CheckpointPlan plan;
  Bytes predicted_peak = 0;  // excludes base overhead
  CostModel model = CostModel::kDynamic;
  std::string solver;
};

Bytes StaticCost(const LayerProfile& profile, const CheckpointPlan& plan);

// s(h, i). Requires h < i <= n.
Bytes SegmentTerm(const LayerProfile& profile, Index h, Index i);

Bytes DynamicPeak(const LayerProfile& profile, const CheckpointPlan& plan);

// U(i, j) = s(i, j) + d_j. Requires i < j <= n.
Bytes UValue(const LayerProfile& profile, Index i, Index j);

Bytes Evaluate(const LayerProfile& profile, const CheckpointPlan& plan, CostModel model);

}  // namespace ckptplan
